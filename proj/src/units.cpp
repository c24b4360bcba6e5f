#include "spinrad/units.hpp"

#include <stdexcept>

namespace spinrad {

UnitSystem UnitSystem::with_characteristic_frequency(double omega_c_rad_s) {
    if (!(omega_c_rad_s > 0.0))
        throw std::invalid_argument("UnitSystem: characteristic frequency must be > 0");
    UnitSystem u;
    u.omega_c = omega_c_rad_s;
    return u;
}

} // namespace spinrad
