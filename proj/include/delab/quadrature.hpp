#ifndef DELAB_QUADRATURE_HPP
#define DELAB_QUADRATURE_HPP

#include <cmath>
#include <functional>

namespace delab {

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol = 1e-10);

} // namespace delab

#endif
