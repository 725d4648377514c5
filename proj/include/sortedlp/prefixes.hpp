#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace sortedlp {

inline constexpr std::string_view kRdfNs = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kRdfsNs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view kOwlNs = "http://www.w3.org/2002/07/owl#";
inline constexpr std::string_view kXsdNs = "http://www.w3.org/2001/XMLSchema#";

/// Namespace abbreviations used by `ns_Local` tokens. Abbreviations start
/// with a lowercase letter and never contain `_`, so the first underscore of
/// a token always separates prefix from local name.
class PrefixTable {
 public:
  /// Starts with rdf, rdfs, owl and xsd bound.
  PrefixTable();

  /// Throws Error on an invalid abbreviation or a conflicting rebinding.
  void declare(const std::string& abbrev, const std::string& base);
  bool has(std::string_view abbrev) const;
  std::optional<std::string> base(std::string_view abbrev) const;

  /// `vin_White_Wine` -> base(vin) + "White_Wine"; nullopt if the token has
  /// no underscore or the prefix is undeclared.
  std::optional<std::string> expand(std::string_view qname) const;

  /// Longest matching base wins; ties go to the alphabetically first
  /// abbreviation. nullopt when no prefix yields a valid local name.
  std::optional<std::string> compact(std::string_view iri) const;

  /// Same as compact() but with `:` as separator (RuleML QName form).
  std::optional<std::string> compactQName(std::string_view iri) const;

  /// Resolves an individual or resource name: known-prefix tokens expand,
  /// anything else (including full IRIs) is returned unchanged.
  std::string resolveName(std::string_view name) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

  static bool isValidAbbreviation(std::string_view abbrev);

 private:
  std::optional<std::pair<std::string, std::string>> split(std::string_view iri) const;

  std::map<std::string, std::string> entries_;
};

bool looksLikeIri(std::string_view text);

}  // namespace sortedlp
