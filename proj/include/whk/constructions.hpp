#pragma once

#include "whk/state_witness.hpp"

#include <optional>
#include <vector>

namespace whk {

// p |psi><psi| + (1 - p) I/4 with psi = (|00> + |11>)/sqrt(2).
QuantumState werner(double p);
// (|00> + |11>)/sqrt(2) and the singlet (|10> - |01>)/sqrt(2).
Vector bell_phi_plus();
Vector singlet();

struct WitnessFamilyMember {
	HermitianOperator op;
	bool in_s;
	double trace_value;  // tr(op * target)
};

// q |phi><phi|^Gamma + (1 - q) sigma, tested for membership in the witnessed
// set of `target`. Both q and sigma are free.
WitnessFamilyMember werner_witness_family(double q, const QuantumState& sigma, const QuantumState& target,
	double tol = kDefaultTol);

struct UPBSpec {
	Dims dims;
	std::vector<ProductVector> vectors;
	int D = 0;
	int n = 0;
	double unextendibility_gap = 0.0;  // min over searched product vectors of sum |<v_i|e,f>|^2
};

// Validates orthogonality (1e-10) and unextendibility evidence (gap >= 1e-3).
UPBSpec make_upb(Dims dims, std::vector<ProductVector> vectors, const SeeSawOptions& options = {});
UPBSpec tiles_upb(const SeeSawOptions& options = {});

// (I - sum |psi_j><psi_j|) / (D - n).
QuantumState upb_complement_state(const UPBSpec& upb);

// d1 d2 ... dk - (d1 + ... + dk) + k - 1.
long long ces_max_dim(const std::vector<int>& dims);

// Random full-rank state on the UPB complement: C G G^dagger C^dagger, normalized.
QuantumState ces_mixture_optimal_sample(const UPBSpec& upb, std::uint64_t seed);

enum class MeasureMode { decomposable_exact, indecomposable_search };

struct MeasureResult {
	double value = 0.0;
	std::optional<Witness> achieving_witness;
	MeasureMode mode = MeasureMode::decomposable_exact;
};

const char* to_string(MeasureMode m);

// max{0, -min tr(W rho)} over W = Q^Gamma with Q >= 0, tr Q = 1, which is
// max{0, -lambda_min(rho^Gamma)}. PPT entangled input falls back to a searched
// witness rescaled to unit trace.
MeasureResult measure(const QuantumState& rho, const SearchOptions& options = {});

}  // namespace whk
