#include "sortedlp/symbol.hpp"

#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace sortedlp {
namespace {

struct InternTable {
  std::shared_mutex mutex;
  std::deque<std::string> texts;
  std::unordered_map<std::string_view, std::uint32_t> index;
};

InternTable& table() {
  static InternTable t;
  return t;
}

}  // namespace

Symbol Symbol::intern(std::string_view text) {
  InternTable& t = table();
  {
    std::shared_lock lock(t.mutex);
    auto it = t.index.find(text);
    if (it != t.index.end()) return Symbol(it->second);
  }
  std::unique_lock lock(t.mutex);
  auto it = t.index.find(text);
  if (it != t.index.end()) return Symbol(it->second);
  const auto id = static_cast<std::uint32_t>(t.texts.size());
  t.texts.emplace_back(text);
  t.index.emplace(t.texts.back(), id);
  return Symbol(id);
}

std::string_view Symbol::str() const {
  InternTable& t = table();
  std::shared_lock lock(t.mutex);
  return t.texts[id_];
}

}  // namespace sortedlp
