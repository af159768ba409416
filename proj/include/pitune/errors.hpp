#pragma once

#include <stdexcept>
#include <string>

namespace pitune {

/*! \brief Raised when a numerical procedure fails to converge or a model is
  singular (root brackets lost, quadrature divergence, ...).

  CLI maps this to exit code 3, while std::invalid_argument (bad user input)
  maps to exit code 2.
*/
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace pitune
