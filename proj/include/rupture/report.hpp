#pragma once

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rupture {

/// Base class for precondition failures raised by kernel operations.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a construction would place a coherent filler on a gapped
/// horn or lifting problem.
class ExclusionConflict : public Error {
 public:
  using Error::Error;
};

struct Violation {
  std::string code;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Validation outcome. Empty means valid; otherwise one entry per violated
/// condition, in the order the checker found them.
class Report {
 public:
  void add(std::string code, std::string message) {
    items_.push_back({std::move(code), std::move(message)});
  }
  void append(const Report& other) {
    items_.insert(items_.end(), other.items_.begin(), other.items_.end());
  }

  [[nodiscard]] bool ok() const { return items_.empty(); }
  [[nodiscard]] std::size_t size() const { return items_.size(); }
  [[nodiscard]] const std::vector<Violation>& items() const { return items_; }

  [[nodiscard]] std::size_t count(const std::string& code) const {
    std::size_t n = 0;
    for (const auto& v : items_) n += v.code == code ? 1 : 0;
    return n;
  }

  [[nodiscard]] std::string str() const {
    std::ostringstream os;
    for (const auto& v : items_) os << v.code << ": " << v.message << '\n';
    return os.str();
  }

 private:
  std::vector<Violation> items_;
};

}  // namespace rupture
