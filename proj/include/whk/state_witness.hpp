#pragma once

#include "whk/operator.hpp"

#include <optional>
#include <vector>

namespace whk {

enum class PptFlag { ppt, npt, unknown };

// Unit-trace positive semidefinite operator. The PPT flag is computed once at
// construction, so a state is an immutable value.
class QuantumState {
	public:
		// Validates trace 1 (within 1e-10) and lambda_min >= -tol * lambda_max.
		static QuantumState from_operator(HermitianOperator op, double tol = kDefaultTol);
		// Divides by the trace first; throws on a non-positive trace.
		static QuantumState normalized(const HermitianOperator& op, double tol = kDefaultTol);
		static QuantumState pure(Dims dims, const Vector& v);
		static QuantumState maximally_mixed(Dims dims);

		const HermitianOperator& op() const { return op_; }
		const Dims& dims() const { return op_.dims(); }
		PptFlag ppt_flag() const { return ppt_; }
		double ppt_min_eigenvalue() const { return pt_min_; }
		double purity() const;

	private:
		QuantumState(HermitianOperator op, double tol);

		HermitianOperator op_;
		PptFlag ppt_ = PptFlag::unknown;
		double pt_min_ = 0.0;
};

struct SeeSawOptions {
	int starts = 64;
	std::uint64_t seed = 0;
	int max_sweeps = 500;
	double convergence = 1e-12;
};

struct BlockPositivityReport {
	double min_value = 0.0;
	ProductVector argmin;
	int starts = 0;
	double converged_fraction = 0.0;
	int best_start = 0;
};

// Alternating minimization of <e,f|op|e,f> over product vectors. Each half
// sweep solves the reduced eigenproblem exactly, so the objective never
// increases. Starts are independent; the merge keeps the lowest value and,
// on ties, the lowest start index.
BlockPositivityReport min_product_expectation(const HermitianOperator& op, const SeeSawOptions& options = {});

// Objective after each half sweep from a fixed start, for monotonicity checks.
std::vector<double> seesaw_trajectory(const HermitianOperator& op, const ProductVector& start, int sweeps);

enum class BlockPositivity { yes_evidence, no_certified, inconclusive };

struct BlockPositivityVerdict {
	BlockPositivity verdict;
	BlockPositivityReport report;
};

// Negative answers are certificates (the argmin product state); positive ones
// are evidence only.
BlockPositivityVerdict is_block_positive(const HermitianOperator& op, const SeeSawOptions& options = {},
	double tol = kDefaultTol);

// Block-positive, non-PSD operator.
class Witness {
	public:
		// Validates lambda_min < -tau and see-saw evidence min >= -tau; throws
		// precondition otherwise. The operator is stored unscaled.
		static Witness from_operator(HermitianOperator op, const SeeSawOptions& options = {},
			double tol = kDefaultTol);
		// W = Q^Gamma for PSD Q: block-positive exactly, since
		// <e,f|Q^Gamma|e,f> = <e,f*|Q|e,f*> >= 0.
		static Witness from_partial_transpose(const HermitianOperator& q, double tol = kDefaultTol);

		const HermitianOperator& op() const { return op_; }
		const Dims& dims() const { return op_.dims(); }
		double min_product_expectation() const { return min_product_; }
		double min_eigenvalue() const { return min_eig_; }
		// True when block-positivity holds by construction rather than by search.
		bool block_positivity_exact() const { return exact_; }

		// Rescaled so the largest-magnitude eigenvalue is 1.
		Witness normalized() const;

	private:
		Witness(HermitianOperator op, double min_product, double min_eig, bool exact)
			: op_(std::move(op)), min_product_(min_product), min_eig_(min_eig), exact_(exact) {}

		HermitianOperator op_;
		double min_product_;
		double min_eig_;
		bool exact_;
};

struct Detection {
	bool detected;
	double value;
};

Detection detects(const Witness& w, const QuantumState& rho, double tol = kDefaultTol);

bool is_ppt(const QuantumState& rho, double tol = kDefaultTol);

// Dimensions where PPT is equivalent to separability.
bool ppt_is_exact(Dims dims);

struct ProductDecomposition {
	std::vector<double> weights;
	std::vector<ProductVector> vectors;

	double total_weight() const;
	HermitianOperator reconstruct(Dims dims) const;
};

enum class Separability { separable, entangled, unknown };

struct SeparabilityVerdict {
	Separability verdict = Separability::unknown;
	bool exact = false;
	std::optional<ProductDecomposition> certificate;
	std::optional<Witness> witness;
	double residual = 0.0;  // Frobenius residual of the certificate, if any
};

struct SearchOptions {
	SeeSawOptions seesaw{};
	int effort = 64;           // max product terms / cutting-plane rounds
	double tol = kDefaultTol;
};

SeparabilityVerdict is_separable(const QuantumState& rho, const SearchOptions& options = {});

// Greedy subtraction of product projectors that keeps the remainder PSD and
// PPT; terminates exactly on separable input at 2x2 and 2x3.
struct DrainResult {
	ProductDecomposition terms;
	HermitianOperator remainder;
	int steps = 0;
};

DrainResult drain_separable(const HermitianOperator& x, int max_steps, const SeeSawOptions& options = {},
	double tol = kDefaultTol);

// Search for a witness detecting a PPT state: the edge construction
// W = P_ker(rho) + (P_ker(rho^Gamma))^Gamma - eps * I, then a cutting-plane
// separator against product projectors. Returns nothing if both fail.
std::optional<Witness> ppt_witness_search(const QuantumState& rho, const SearchOptions& options = {});

enum class DecompositionVerdict { decomposable, indecomposable_evidence, inconclusive };

struct DecompositionCertificate {
	DecompositionVerdict verdict = DecompositionVerdict::inconclusive;
	double a = 0.0;
	HermitianOperator p;
	HermitianOperator q;
	double residual = 0.0;
	double margin = 0.0;  // best s with Q >= sI and W - Q^Gamma >= sI
	std::optional<QuantumState> counterexample;
};

// Attempts W = a P + (1 - a) Q^Gamma with P, Q >= 0.
DecompositionCertificate decompose_witness(const Witness& w, int iters = 200, double tol = kDefaultTol);

// Minimizes tr(W rho) over PPT states; returns rho when the minimum is below -tau.
std::optional<QuantumState> indecomposability_certificate(const Witness& w, std::uint64_t seed = 0,
	double tol = kDefaultTol);

}  // namespace whk
