#ifndef HDGFLOW_ERRORS_HPP
#define HDGFLOW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hdgflow {

// Mesh connectivity violates the conforming-triangulation contract.
class topology_error : public std::runtime_error {
public:
  explicit topology_error(const std::string& what) : std::runtime_error(what) {}
};

// A flux evaluation hit a state outside the admissible set (rho <= 0 or p <= 0).
// Carries the element or edge where it happened so failures are traceable.
class inadmissible_state_error : public std::runtime_error {
public:
  inadmissible_state_error(const std::string& what, int entity_id, double x, double y)
      : std::runtime_error(what + " at entity " + std::to_string(entity_id) + ", x=(" +
                           std::to_string(x) + "," + std::to_string(y) + ")"),
        entity_id(entity_id), x(x), y(y) {}
  int entity_id;
  double x, y;
};

// Linear or nonlinear solver could not meet its contract (breakdown, stagnation,
// singular block).
class solver_error : public std::runtime_error {
public:
  explicit solver_error(const std::string& what) : std::runtime_error(what) {}
};

class io_error : public std::runtime_error {
public:
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace hdgflow

#endif
