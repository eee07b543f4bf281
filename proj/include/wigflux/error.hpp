#pragma once

#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace wigflux {

/// Category of a rejected operation. Values line up with the CLI exit codes.
enum class ErrorKind {
  config = 2,
  numerical = 3,
  io = 4,
};

/// Every rejection raised by the library. `where()` names the module and
/// operation ("states.wigner_transform"), `what()` carries the offending
/// values.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string where, const std::string& message)
      : std::runtime_error(message), kind_(kind), where_(std::move(where)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& where() const noexcept { return where_; }

 private:
  ErrorKind kind_;
  std::string where_;
};

namespace detail {

template <class... Parts>
std::string concat(const Parts&... parts) {
  std::ostringstream out;
  out.precision(17);
  (out << ... << parts);
  return out.str();
}

}  // namespace detail

template <class... Parts>
[[noreturn]] void reject(ErrorKind kind, std::string where, const Parts&... parts) {
  throw Error(kind, std::move(where), detail::concat(parts...));
}

template <class... Parts>
[[noreturn]] void reject_numerical(std::string where, const Parts&... parts) {
  reject(ErrorKind::numerical, std::move(where), parts...);
}

template <class... Parts>
[[noreturn]] void reject_config(std::string where, const Parts&... parts) {
  reject(ErrorKind::config, std::move(where), parts...);
}

}  // namespace wigflux
