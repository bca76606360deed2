#include "parfrac/rng.hpp"

#include <cmath>

namespace parfrac {

double NormalSampler::next() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = 1.0 - rng_.uniform();  // (0, 1], keeps the log finite
  double u2 = rng_.uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double angle = 2.0 * 3.14159265358979323846 * u2;
  spare_ = r * std::sin(angle);
  have_spare_ = true;
  return r * std::cos(angle);
}

}  // namespace parfrac
