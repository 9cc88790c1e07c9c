#include "test_util.hpp"

#include "whk/constructions.hpp"
#include "whk/hierarchy.hpp"

#include <doctest.h>

using namespace whk;

namespace {

const Dims k22{2, 2};

Witness phi_witness() {
	return Witness::from_partial_transpose(HermitianOperator::projector(k22, oracle::phi()));
}

// Random exact witness: (|v><v|)^Gamma for a random entangled v.
Witness random_witness(std::uint64_t seed) {
	Rng rng(seed);
	return Witness::from_partial_transpose(HermitianOperator::projector(k22, rng.unit_vector(4)));
}

// Random witness pair; half of them share a PSD mixture.
std::pair<Witness, Witness> random_pair(std::uint64_t seed) {
	Witness w1 = random_witness(2 * seed);
	if (seed % 2 == 0) return {w1, random_witness(2 * seed + 1)};
	// Mixing in positive operators makes blocking combinations common.
	Rng rng(seed + 77);
	Matrix g = rng.ginibre(4, 4);
	HermitianOperator pos(k22, g * g.adjoint() / (g * g.adjoint()).trace().real());
	HermitianOperator w2 = random_witness(2 * seed + 1).op() * 0.5 + pos * (0.5 + 0.5 * rng.uniform());
	if (min_eigenvalue(w2) >= -1e-6) w2 = random_witness(2 * seed + 1).op();
	return {w1, Witness::from_operator(w2)};
}

}  // namespace

TEST_CASE("classify examples") {
	CHECK(classify(HermitianOperator::identity(k22) * 0.25).stratum == Stratum::separable_state);
	// Unnormalized states are classified on their ray.
	CHECK(classify(HermitianOperator::identity(k22) * 3.0).stratum == Stratum::separable_state);

	ClassLabel w09 = classify(werner(0.9).op());
	CHECK(w09.stratum == Stratum::entangled_state);
	REQUIRE(w09.sub.has_value());
	CHECK(*w09.sub == SubLabel::npt);

	ClassLabel wit = classify(phi_witness().op());
	CHECK(wit.stratum == Stratum::entanglement_witness);
	REQUIRE(wit.sub.has_value());
	CHECK(*wit.sub == SubLabel::decomposable);

	Matrix m = Matrix::Zero(4, 4);
	m(0, 0) = -1.0;
	CHECK(classify(HermitianOperator(k22, m)).stratum == Stratum::other_observable);

	CHECK_THROWS_AS(classify(HermitianOperator::zero(k22)), Error);

	ClassLabel tiles = classify(upb_complement_state(tiles_upb()).op());
	CHECK(tiles.stratum == Stratum::entangled_state);
	REQUIRE(tiles.sub.has_value());
	CHECK(*tiles.sub == SubLabel::ppt_bound);
}

TEST_CASE("class labels respect sub-label legality") {
	for (std::uint64_t seed = 0; seed < 30; seed++) {
		HermitianOperator x = random_hermitian(k22, seed, Ensemble::gue);
		ClassLabel l = classify(x);
		if (l.sub) {
			bool state_sub = *l.sub == SubLabel::npt || *l.sub == SubLabel::ppt_bound;
			if (l.stratum == Stratum::entangled_state) CHECK(state_sub);
			else CHECK(l.stratum == Stratum::entanglement_witness);
			if (l.stratum == Stratum::entanglement_witness) CHECK_FALSE(state_sub);
		}
	}
}

TEST_CASE("witness_for examples") {
	Witness w = witness_for(werner(0.9));
	// Proportional to |phi><phi|^Gamma, rescaled to unit spectral radius.
	Matrix expect = oracle::pt(oracle::outer(oracle::phi()), k22) * 2.0;
	CHECK((w.op().matrix() - expect).norm() < 1e-9);
	CHECK(detects(w, werner(0.9)).detected);

	try {
		witness_for(QuantumState::maximally_mixed(k22));
		FAIL("expected an error");
	} catch (const Error& e) {
		CHECK(e.code() == ErrorCode::no_witness_exists);
	}

	QuantumState tiles = upb_complement_state(tiles_upb());
	Witness wt = witness_for(tiles);
	CHECK(wt.op().pairing(tiles.op()) < -1e-4);
	CHECK(wt.min_product_expectation() >= -1e-9);
}

TEST_CASE("super witness examples") {
	QuantumState pi = super_witness_for(phi_witness());
	CHECK((pi.op().matrix() - oracle::outer(oracle::psi())).norm() < 1e-9);
	CHECK(phi_witness().op().pairing(pi.op()) == doctest::Approx(-0.5));

	QuantumState tiles = upb_complement_state(tiles_upb());
	Witness wt = witness_for(tiles);
	QuantumState st = super_witness_for(wt);
	CHECK(wt.op().pairing(st.op()) < 0.0);
	CHECK(st.ppt_flag() == PptFlag::npt);

	CHECK_THROWS_AS(Witness::from_operator(-HermitianOperator::identity(k22)), Error);

	// Condition (i'): a state pairs non-negatively with every state.
	for (std::uint64_t seed = 0; seed < 100; seed++) {
		HermitianOperator rho = random_hermitian(k22, seed, Ensemble::state);
		CHECK(pi.op().pairing(rho) >= -1e-15);
	}
}

TEST_CASE("super-super witness examples") {
	Matrix m = Matrix::Zero(4, 4);
	m(0, 0) = -1.0;
	HermitianOperator o(k22, m);
	QuantumState u = super_super_witness_for(o);
	CHECK(o.pairing(u.op()) == doctest::Approx(-1.0));
	CHECK(std::abs(u.op().matrix()(0, 0).real() - 1.0) < 1e-9);

	HermitianOperator o2 = HermitianOperator::projector(k22, oracle::psi()) - HermitianOperator::identity(k22) * 0.6;
	QuantumState u2 = super_super_witness_for(o2);
	CHECK(o2.pairing(u2.op()) < -1e-9);
	CHECK(o2.pairing(u2.op()) >= oracle::grid_product_min(o2.matrix(), 20) - 1e-9);

	try {
		super_super_witness_for(HermitianOperator::identity(k22));
		FAIL("expected an error");
	} catch (const Error& e) {
		CHECK(e.code() == ErrorCode::not_in_observables);
	}
}

TEST_CASE("common detected state examples") {
	CommonStateResult same = common_detected_state(phi_witness(), phi_witness());
	REQUIRE(same.state.has_value());
	CHECK(detects(phi_witness(), *same.state).detected);
	CHECK((same.state->op().matrix() - oracle::outer(oracle::psi())).norm() < 1e-6);

	// (1 (x) sigma_x) conjugation: the equal combination is PSD.
	Matrix sx = Matrix::Zero(4, 4);
	sx(0, 1) = sx(1, 0) = sx(2, 3) = sx(3, 2) = 1.0;
	HermitianOperator flipped(k22, sx * phi_witness().op().matrix() * sx);
	CommonStateResult blocked = common_detected_state(phi_witness(), Witness::from_operator(flipped));
	REQUIRE(blocked.blocking_lambda.has_value());
	CHECK_FALSE(blocked.state.has_value());
	Matrix half = 0.5 * (phi_witness().op().matrix() + flipped.matrix());
	CHECK(oracle::min_eig(half) >= -1e-12);
}

TEST_CASE("common detected state agrees with the lambda grid") {
	int found = 0;
	for (std::uint64_t seed = 0; seed < 200; seed++) {
		auto [w1, w2] = random_pair(seed);
		CommonStateResult r = common_detected_state(w1, w2);
		double tau = 1e-9 * std::max(eigenvalues(w1.op()).cwiseAbs().maxCoeff(), eigenvalues(w2.op()).cwiseAbs().maxCoeff());
		std::vector<double> grid = lambda_grid(w1.op(), w2.op(), 1001);
		bool all_negative = std::all_of(grid.begin(), grid.end(), [&](double g) { return g < -tau; });
		CHECK(r.state.has_value() == all_negative);
		if (r.state) {
			found++;
			CHECK(detects(w1, *r.state).detected);
			CHECK(detects(w2, *r.state).detected);
		}
	}
	CHECK(found > 10);
	CHECK(found < 190);
}

TEST_CASE("common witness examples") {
	QuantumState s = QuantumState::pure(k22, oracle::phi());
	CommonWitnessResult same = common_witness(s, s);
	REQUIRE(same.witness.has_value());
	CHECK(detects(*same.witness, s).detected);

	CommonWitnessResult blocked = common_witness(QuantumState::pure(k22, oracle::psi()), QuantumState::pure(k22, oracle::psi_plus()));
	REQUIRE(blocked.blocking_lambda.has_value());
	CHECK(*blocked.blocking_lambda == doctest::Approx(0.5).epsilon(1e-6));
	Matrix mix = 0.5 * (oracle::outer(oracle::psi()) + oracle::outer(oracle::psi_plus()));
	CHECK((oracle::pt(mix, k22) - mix).norm() < 1e-12);
	CHECK(blocked.exact);
}

TEST_CASE("common witness agrees with the PPT grid scan") {
	int found = 0;
	for (std::uint64_t seed = 0; seed < 200; seed++) {
		Rng rng(seed + 5000);
		QuantumState p1 = QuantumState::pure(k22, rng.unit_vector(4));
		QuantumState p2 = QuantumState::pure(k22, rng.unit_vector(4));
		CommonWitnessResult r = common_witness(p1, p2);
		HermitianOperator a = partial_transpose(p1.op());
		HermitianOperator b = partial_transpose(p2.op());
		double tau = 1e-9 * std::max(eigenvalues(a).cwiseAbs().maxCoeff(), eigenvalues(b).cwiseAbs().maxCoeff());
		std::vector<double> grid = lambda_grid(a, b, 1001);
		bool all_npt = std::all_of(grid.begin(), grid.end(), [&](double g) { return g < -tau; });
		CHECK(r.witness.has_value() == all_npt);
		if (r.witness) {
			found++;
			CHECK(detects(*r.witness, p1).detected);
			CHECK(detects(*r.witness, p2).detected);
		}
	}
	CHECK(found > 10);
}

TEST_CASE("distinguish contract") {
	QuantumState bell = QuantumState::pure(k22, oracle::psi());
	QuantumState mixed = QuantumState::maximally_mixed(k22);
	HermitianOperator m = distinguish(bell, mixed);
	// A = psi - I/4; tr(A psi) = 3/4, tr(A I/4) = 0, c = 3/8.
	CHECK(m.pairing(mixed.op()) == doctest::Approx(-3.0 / 8.0));
	CHECK(m.pairing(bell.op()) == doctest::Approx(3.0 / 8.0));
	CHECK(min_eigenvalue(m) < 0.0);

	try {
		distinguish(bell, bell);
		FAIL("expected an error");
	} catch (const Error& e) {
		CHECK(e.code() == ErrorCode::indistinguishable);
	}

	for (std::uint64_t seed = 0; seed < 500; seed++) {
		Dims d = seed % 3 == 0 ? Dims{2, 3} : k22;
		QuantumState r1 = QuantumState::from_operator(random_hermitian(d, seed, seed % 2 ? Ensemble::state : Ensemble::product_state));
		QuantumState r2 = QuantumState::from_operator(random_hermitian(d, seed + 9999, Ensemble::state));
		HermitianOperator sep = distinguish(r1, r2);
		CHECK(sep.pairing(r2.op()) < 0.0);
		CHECK(sep.pairing(r1.op()) > 0.0);
		CHECK(min_eigenvalue(sep) < 0.0);
	}
}

TEST_CASE("separate examples") {
	Rng rng(3);
	std::vector<HermitianOperator> samples;
	for (int i = 0; i < 200; i++) samples.push_back(rng.product_vector(k22).projector());

	SeparatorResult r = separate(QuantumState::pure(k22, oracle::phi()).op(), samples);
	CHECK(r.target_value < 0.0);
	CHECK(r.target_value < r.set_floor - 1e-9);
	CHECK(r.separator.frobenius_norm() == doctest::Approx(1.0));
	// The separator acts like a witness on the singlet.
	Witness w = witness_for(QuantumState::pure(k22, oracle::phi()));
	CHECK(w.op().pairing(QuantumState::pure(k22, oracle::phi()).op()) < 0.0);

	try {
		separate(HermitianOperator::identity(k22) * 0.25, samples);
		FAIL("expected an error");
	} catch (const Error& e) {
		CHECK(e.code() == ErrorCode::no_separator_found);
	}

	Matrix m = Matrix::Zero(4, 4);
	m(0, 0) = -1.0;
	SeparatorResult one = separate(HermitianOperator(k22, m), {HermitianOperator::identity(k22)});
	CHECK(one.target_value < one.set_floor);
	CHECK_THROWS_AS(separate(HermitianOperator(k22, m), {}), Error);
}

TEST_CASE("duality chain on constructed witnesses") {
	for (std::uint64_t seed = 0; seed < 30; seed++) {
		QuantumState rho = QuantumState::from_operator(random_hermitian(k22, seed, Ensemble::npt_state));
		Witness w = witness_for(rho);
		QuantumState pi = super_witness_for(w);
		double tau = 1e-9 * eigenvalues(w.op()).cwiseAbs().maxCoeff();
		CHECK(w.op().pairing(pi.op()) < -tau);
		CHECK(w.op().pairing(rho.op()) < -tau);
	}
}
