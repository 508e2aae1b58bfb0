#pragma once

namespace catdag {

/// Causal contrast Pr(Y = benchmark | do(X_v = high)) - Pr(Y = benchmark | do(X_v = low)).
/// Nodes and levels are 0-based codes.
struct CausalQuery {
  int response = 0;
  int treatment = 1;
  int treatment_high = 1;
  int treatment_low = 0;  // reference level
  int benchmark = 1;
};

}  // namespace catdag
