#include "fermi/errors.hpp"

namespace fermi {

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const AccuracyError*>(&e)) return exit_code::accuracy;
  if (dynamic_cast<const ConsistencyError*>(&e)) return exit_code::consistency;
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const DomainError*>(&e) ||
      dynamic_cast<const NullEventError*>(&e) ||
      dynamic_cast<const UnregisteredSmearing*>(&e))
    return exit_code::config;
  return exit_code::other;
}

}  // namespace fermi
