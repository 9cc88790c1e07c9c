#pragma once

#include "whk/state_witness.hpp"

#include <limits>
#include <optional>
#include <vector>

namespace whk {

// w is not PSD and tr(w rho) < -tau.
bool in_witnessed_set(const HermitianOperator& w, const QuantumState& rho, double tol = kDefaultTol);

// Block-positive members of the witnessed set of rho: perturbed (|n><n|)^Gamma
// mixed with random PSD operators for NPT rho, and the searched witness mixed
// with PSD operators for PPT entangled rho. Empty for separable rho.
std::vector<HermitianOperator> sample_witnessed_set(const QuantumState& rho, int count, std::uint64_t seed,
	const SearchOptions& options = {});

struct DeltaResult {
	double delta = std::numeric_limits<double>::infinity();
	double mu_star = 0.0;
	bool support_contained = false;
};

// mu* = sup{mu : rho1 - mu rho2 >= 0}, delta = 1 / mu*. On supp(rho1) this is
// 1 / lambda_max(A^{-1/2} B A^{-1/2}) with A, B the compressions of rho1, rho2.
DeltaResult delta(const QuantumState& rho1, const QuantumState& rho2, double tol = kDefaultTol);

struct FinerVerdict {
	bool finer = false;
	double epsilon = 0.0;
	std::optional<QuantumState> p;
	std::optional<HermitianOperator> counterexample;
	// P carries a product decomposition, or is PPT at (2,2) / (2,3).
	bool p_separable = false;
};

// rho2 finer than rho1: rho1 = (1 - eps) rho2 + eps P with P separable.
FinerVerdict is_finer(const QuantumState& rho1, const QuantumState& rho2, const SearchOptions& options = {});

struct OptimalityVerdict {
	bool optimal = false;
	std::optional<ProductVector> witness_vector;
	double range_gap = 0.0;
	bool low_confidence = false;
	// Verified subtraction strength when non-optimal.
	double epsilon = 0.0;
};

OptimalityVerdict is_optimal(const QuantumState& rho, const SearchOptions& options = {});

struct BsaTraceRow {
	int step;
	double lambda;
	double residual;  // trace left in the unsubtracted part
};

struct BSAResult {
	double lambda_sep = 0.0;
	ProductDecomposition sep;  // weights sum to 1 when nonempty
	std::optional<QuantumState> remainder;
	double reconstruction_residual = 0.0;
	// Remainder range still contains a product vector (step budget ran out).
	bool remainder_has_product_vectors = false;
	std::vector<BsaTraceRow> trace;
};

BSAResult optimize(const QuantumState& rho, int max_steps = 200, const SearchOptions& options = {});

// No product vector |e,f> lies in range(rho) with |e,f*> in range(rho^Gamma).
bool is_edge(const QuantumState& rho, const SearchOptions& options = {});

}  // namespace whk
