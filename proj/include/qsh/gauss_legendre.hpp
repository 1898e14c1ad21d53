#pragma once

#include <vector>

namespace qsh {

struct GaussLegendre {
  std::vector<double> nodes;    // ascending, in (-1, 1)
  std::vector<double> weights;  // sum to 2
};

/// n-point Gauss-Legendre rule on [-1, 1] (Newton on P_n, Tricomi start).
/// Results are cached per n; the returned reference stays valid.
const GaussLegendre& gauss_legendre(int n);

}  // namespace qsh
