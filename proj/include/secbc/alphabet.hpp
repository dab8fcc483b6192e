#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace secbc {

/// A named finite alphabet with a fixed symbol order.
class Alphabet {
 public:
  Alphabet() = default;

  Alphabet(std::string name, std::vector<std::string> symbols)
      : name_(std::move(name)), symbols_(std::move(symbols)) {
    if (symbols_.empty()) {
      throw std::invalid_argument("alphabet '" + name_ + "' has no symbols");
    }
    if (symbols_.size() > 255) {
      throw std::invalid_argument("alphabet '" + name_ + "' exceeds 255 symbols");
    }
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      for (std::size_t j = i + 1; j < symbols_.size(); ++j) {
        if (symbols_[i] == symbols_[j]) {
          throw std::invalid_argument("alphabet '" + name_ + "' repeats symbol '" +
                                      symbols_[i] + "'");
        }
      }
    }
  }

  /// Convenience: symbols "0", "1", ..., "size-1".
  static Alphabet indexed(std::string name, std::size_t size) {
    std::vector<std::string> syms;
    syms.reserve(size);
    for (std::size_t i = 0; i < size; ++i) syms.push_back(std::to_string(i));
    return Alphabet(std::move(name), std::move(syms));
  }

  const std::string& name() const { return name_; }
  std::size_t size() const { return symbols_.size(); }
  const std::vector<std::string>& symbols() const { return symbols_; }
  const std::string& symbol(std::size_t i) const { return symbols_.at(i); }

  std::size_t index_of(std::string_view symbol) const {
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      if (symbols_[i] == symbol) return i;
    }
    throw std::out_of_range("symbol '" + std::string(symbol) + "' not in alphabet '" +
                            name_ + "'");
  }

  bool operator==(const Alphabet& other) const {
    return name_ == other.name_ && symbols_ == other.symbols_;
  }
  bool operator!=(const Alphabet& other) const { return !(*this == other); }

 private:
  std::string name_;
  std::vector<std::string> symbols_;
};

}  // namespace secbc
