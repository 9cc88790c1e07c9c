#pragma once

#include "whk/state_witness.hpp"

#include <vector>

namespace whk::detail {

struct StartResult {
	double value;
	ProductVector vector;
	bool converged;
};

// One see-saw run per start, in start order.
std::vector<StartResult> seesaw_all(const HermitianOperator& op, const SeeSawOptions& options);

// Continues the alternating minimization from a given product vector.
ProductVector seesaw_from(const Matrix& m, Dims d, const ProductVector& start, int sweeps);

// Range projector and pseudo-inverse built from eigenvalues above
// tol * max|eig|; eigenvalues at or below the cut (including small negative
// ones) are treated as zero rather than rejected.
struct RangeData {
	HermitianOperator projector;
	HermitianOperator pinv;
	int rank;
};
RangeData range_data(const HermitianOperator& op, double tol);

// Nearest point of the cone generated by `generators` to `target` in the
// Frobenius norm, by Lawson-Hanson nonnegative least squares.
struct ConeProjection {
	Eigen::VectorXd coefficients;
	Matrix nearest;
	double distance = 0.0;
	int iterations = 0;
};
ConeProjection project_onto_cone(const Matrix& target, const std::vector<Matrix>& generators, int max_iter);

// Witness from the negative eigenvector n of rho^Gamma: W = (|n><n|)^Gamma.
Witness npt_witness(const QuantumState& rho);

}  // namespace whk::detail
