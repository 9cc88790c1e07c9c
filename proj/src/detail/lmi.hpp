#pragma once

#include "whk/operator.hpp"

#include <limits>
#include <vector>

namespace whk::detail {

// F(y) = constant + sum_k y_k * coeffs[k], required to be positive definite.
struct AffineLmi {
	Matrix constant;
	std::vector<Matrix> coeffs;

	Matrix evaluate(const Eigen::VectorXd& y) const;
};

struct LmiOptions {
	double gap = 1e-11;       // stop once (#barrier dimensions) / t falls below this
	double t0 = 1.0;
	double growth = 10.0;
	int max_newton = 200;     // per centering step
	// Optional early exit: stop as soon as objective value exceeds this.
	double stop_above = std::numeric_limits<double>::infinity();
};

struct LmiResult {
	Eigen::VectorXd y;
	double objective = 0.0;
	bool converged = false;
	int newton_steps = 0;
};

// Maximizes c . y subject to F_j(y) > 0 for every constraint, by a log-barrier
// path-following method with damped Newton centering. `start` must be
// strictly feasible; the returned iterate is strictly feasible as well.
LmiResult maximize(const Eigen::VectorXd& c, const std::vector<AffineLmi>& constraints,
	Eigen::VectorXd start, const LmiOptions& options = {});

// Orthonormal basis (Frobenius inner product) of n x n Hermitian matrices:
// n diagonal units followed by symmetric / antisymmetric off-diagonal pairs.
std::vector<Matrix> hermitian_basis(int n);
// Same, restricted to traceless matrices (n^2 - 1 elements).
std::vector<Matrix> traceless_hermitian_basis(int n);

}  // namespace whk::detail
