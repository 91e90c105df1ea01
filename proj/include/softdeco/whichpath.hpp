#pragma once

namespace softdeco {

/// Which-path quantities carried by a photon-state overlap e^{-gamma}.
struct WhichPathSummary {
  double gamma = 0.0;
  double overlap = 1.0;            ///< |<R|L>| = e^{-gamma}
  double distinguishability = 0.0; ///< trace distance sqrt(1 - e^{-2 gamma})
  double visibility_bound = 1.0;   ///< V_max = e^{-gamma}
  double guess_bound = 0.5;        ///< (1 + D) / 2

  // Small-gamma surrogates, D ~ gamma and V <~ 1 - gamma. Labelled only;
  // nothing above is derived from them.
  double linear_distinguishability = 0.0;
  double linear_visibility_bound = 1.0;
  bool linear_valid = true;        ///< gamma < 0.1
};

/// Throws std::domain_error for gamma < 0 or NaN.
WhichPathSummary summarize(double gamma);

}  // namespace softdeco
