#include "sortedlp/prefixes.hpp"

#include <cctype>

#include "sortedlp/errors.hpp"

namespace sortedlp {

PrefixTable::PrefixTable() {
  entries_.emplace("rdf", std::string(kRdfNs));
  entries_.emplace("rdfs", std::string(kRdfsNs));
  entries_.emplace("owl", std::string(kOwlNs));
  entries_.emplace("xsd", std::string(kXsdNs));
}

bool PrefixTable::isValidAbbreviation(std::string_view abbrev) {
  if (abbrev.empty() || !std::islower(static_cast<unsigned char>(abbrev.front()))) return false;
  for (char c : abbrev) {
    if (!std::isalnum(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

void PrefixTable::declare(const std::string& abbrev, const std::string& base) {
  if (!isValidAbbreviation(abbrev)) {
    throw Error("invalid prefix abbreviation '" + abbrev +
                "' (must start lowercase and contain only letters and digits)");
  }
  auto [it, inserted] = entries_.emplace(abbrev, base);
  if (!inserted && it->second != base) {
    throw Error("prefix '" + abbrev + "' already bound to <" + it->second + ">");
  }
}

bool PrefixTable::has(std::string_view abbrev) const { return entries_.count(std::string(abbrev)) != 0; }

std::optional<std::string> PrefixTable::base(std::string_view abbrev) const {
  auto it = entries_.find(std::string(abbrev));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> PrefixTable::expand(std::string_view qname) const {
  const auto pos = qname.find('_');
  if (pos == std::string_view::npos || pos == 0) return std::nullopt;
  auto b = base(qname.substr(0, pos));
  if (!b) return std::nullopt;
  return *b + std::string(qname.substr(pos + 1));
}

namespace {
bool isLocalName(std::string_view local) {
  if (local.empty()) return false;
  for (char c : local) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}
}  // namespace

std::optional<std::pair<std::string, std::string>> PrefixTable::split(std::string_view iri) const {
  std::optional<std::pair<std::string, std::string>> best;
  std::size_t bestLen = 0;
  for (const auto& [abbrev, b] : entries_) {
    if (b.empty() || iri.size() <= b.size() || iri.compare(0, b.size(), b) != 0) continue;
    const std::string_view local = iri.substr(b.size());
    if (!isLocalName(local)) continue;
    if (!best || b.size() > bestLen) {
      best = std::make_pair(abbrev, std::string(local));
      bestLen = b.size();
    }
  }
  return best;
}

std::optional<std::string> PrefixTable::compact(std::string_view iri) const {
  auto s = split(iri);
  if (!s) return std::nullopt;
  return s->first + "_" + s->second;
}

std::optional<std::string> PrefixTable::compactQName(std::string_view iri) const {
  auto s = split(iri);
  if (!s) return std::nullopt;
  return s->first + ":" + s->second;
}

std::string PrefixTable::resolveName(std::string_view name) const {
  if (auto e = expand(name)) return *e;
  return std::string(name);
}

bool looksLikeIri(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos || colon == 0) return false;
  if (!std::isalpha(static_cast<unsigned char>(text.front()))) return false;
  for (std::size_t i = 0; i < colon; ++i) {
    const char c = text[i];
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' && c != '.') return false;
  }
  return text.size() > colon + 1;
}

}  // namespace sortedlp
