#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace sortedlp {

/// Process-wide interned string. Two symbols are equal iff their text is equal.
/// The intern table is append-only and thread-safe; text views stay valid for
/// the lifetime of the process.
class Symbol {
 public:
  Symbol() : Symbol(intern("")) {}

  static Symbol intern(std::string_view text);

  std::string_view str() const;
  std::uint32_t id() const { return id_; }
  bool empty() const { return str().empty(); }

  friend bool operator==(Symbol a, Symbol b) { return a.id_ == b.id_; }
  friend bool operator!=(Symbol a, Symbol b) { return a.id_ != b.id_; }
  // Orders by text, so iteration over symbol-keyed maps is reproducible.
  friend bool operator<(Symbol a, Symbol b) { return a.id_ != b.id_ && a.str() < b.str(); }

 private:
  explicit Symbol(std::uint32_t id) : id_(id) {}
  std::uint32_t id_;
};

}  // namespace sortedlp

template <>
struct std::hash<sortedlp::Symbol> {
  std::size_t operator()(sortedlp::Symbol s) const noexcept { return std::hash<std::uint32_t>{}(s.id()); }
};
