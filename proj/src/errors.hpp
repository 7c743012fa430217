#ifndef VSEL_ERRORS_HPP
#define VSEL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace vsel {

// Bad or inconsistent user input (config file, CLI overrides).  Maps to
// process exit code 2.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical guard tripped (integrator instability, grid leak, resolution
// check).  Maps to process exit code 3.
class NumericalAbort : public std::runtime_error {
  public:
    explicit NumericalAbort(const std::string& what) : std::runtime_error(what) {}
};

} // namespace vsel

#endif
