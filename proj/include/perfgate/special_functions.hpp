#pragma once

namespace perfgate {

/// Regularized incomplete beta I_x(a, b), a, b > 0, x in [0, 1].
/// Continued fraction (modified Lentz), using the symmetry
/// I_x(a,b) = 1 - I_{1-x}(b,a) where the fraction converges faster.
double regularized_incomplete_beta(double a, double b, double x);

/// P(|T| >= |t|) for Student's t with `df` degrees of freedom.
double student_t_two_tailed(double t, double df);

}  // namespace perfgate
