#include "softdeco/whichpath.hpp"

#include <cmath>
#include <stdexcept>

namespace softdeco {

WhichPathSummary summarize(double gamma) {
  if (!(gamma >= 0.0)) throw std::domain_error("summarize: gamma must be >= 0");
  WhichPathSummary s;
  s.gamma = gamma;
  s.overlap = std::exp(-gamma);
  // 1 - e^{-2g} via expm1 keeps D accurate for tiny gamma
  s.distinguishability = std::sqrt(-std::expm1(-2.0 * gamma));
  s.visibility_bound = s.overlap;
  s.guess_bound = 0.5 * (1.0 + s.distinguishability);
  s.linear_distinguishability = gamma;
  s.linear_visibility_bound = 1.0 - gamma;
  s.linear_valid = gamma < 0.1;
  return s;
}

}  // namespace softdeco
