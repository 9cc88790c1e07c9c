#pragma once

#include "whk/state_witness.hpp"

#include <optional>
#include <string>
#include <vector>

namespace whk {

enum class Stratum { separable_state, entangled_state, entanglement_witness, other_observable, unknown };
enum class SubLabel { npt, ppt_bound, decomposable, indecomposable_evidence };

const char* to_string(Stratum s);
const char* to_string(SubLabel s);

struct ClassLabel {
	Stratum stratum = Stratum::unknown;
	std::optional<SubLabel> sub;
	// True when the verdict rests on an exact criterion rather than search evidence.
	bool exact = false;
};

ClassLabel classify(const HermitianOperator& op, const SearchOptions& options = {});

// Witness detecting an entangled state, rescaled to max |eig| = 1. NPT states
// get (|n><n|)^Gamma from the negative eigenvector n of rho^Gamma.
Witness witness_for(const QuantumState& rho, const SearchOptions& options = {});

// Pure state on the most negative eigenvector of w.
QuantumState super_witness_for(const Witness& w, double tol = kDefaultTol);

// Product state at the block-positivity argmin of a non-block-positive o.
QuantumState super_super_witness_for(const HermitianOperator& o, const SeeSawOptions& options = {},
	double tol = kDefaultTol);

struct CommonStateResult {
	std::optional<QuantumState> state;
	std::optional<double> blocking_lambda;
	double best_lambda = 0.0;
	double best_value = 0.0;  // max over lambda of lambda_min of the combination
};

CommonStateResult common_detected_state(const Witness& w1, const Witness& w2, double tol = kDefaultTol);

struct CommonWitnessResult {
	std::optional<Witness> witness;
	std::optional<double> blocking_lambda;
	double best_lambda = 0.0;
	double best_value = 0.0;
	// At (2,2) and (2,3) a PPT combination is separable, so a blocking lambda
	// rules out any common witness; elsewhere it is evidence only.
	bool exact = false;
};

CommonWitnessResult common_witness(const QuantumState& p1, const QuantumState& p2, double tol = kDefaultTol);

// M = A - cI with A = r1 - r2, c = (tr(A r1) + tr(A r2)) / 2, so that
// tr(M r2) < 0 < tr(M r1).
HermitianOperator distinguish(const QuantumState& r1, const QuantumState& r2, double tol = kDefaultTol);

struct SeparatorResult {
	HermitianOperator separator;
	double target_value;
	double set_floor;
};

// Unit-Frobenius H with tr(H x) >= 0 on every sample and tr(H target) < 0,
// from the nearest point of the sampled cone.
SeparatorResult separate(const HermitianOperator& target, const std::vector<HermitianOperator>& cone_samples,
	int iters = 1000, double tol = kDefaultTol);

// lambda_min(lambda A + (1 - lambda) B) on an evenly spaced grid over [0, 1].
std::vector<double> lambda_grid(const HermitianOperator& a, const HermitianOperator& b, int points);

}  // namespace whk
