#ifndef SDCA_ERRORS_HPP
#define SDCA_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sdca {

// A dual variable fell outside the domain of the loss conjugate.
class domain_error : public std::domain_error {
 public:
  domain_error(std::size_t instance, const std::string &what)
      : std::domain_error("instance " + std::to_string(instance) + ": " + what),
        instance_(instance) {}
  explicit domain_error(const std::string &what)
      : std::domain_error(what), instance_(static_cast<std::size_t>(-1)) {}

  std::size_t instance() const noexcept { return instance_; }

 private:
  std::size_t instance_;
};

// The requested operation does not exist for this loss/regularizer.
class unsupported_operation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class parse_error : public std::runtime_error {
 public:
  parse_error(std::size_t line, const std::string &what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace sdca

#endif
