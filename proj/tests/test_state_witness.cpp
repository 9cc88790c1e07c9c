#include "test_util.hpp"

#include "whk/constructions.hpp"
#include "whk/state_witness.hpp"

#include <doctest.h>

using namespace whk;

namespace {

const Dims k22{2, 2};

Witness phi_witness() {
	return Witness::from_partial_transpose(HermitianOperator::projector(k22, oracle::phi()));
}

}  // namespace

TEST_CASE("states validate trace and positivity") {
	CHECK_THROWS_AS(QuantumState::from_operator(HermitianOperator::identity(k22)), Error);
	Matrix bad = oracle::werner(0.5);
	bad(0, 0) -= 0.5;
	bad(1, 1) += 0.5;
	CHECK_THROWS_AS(QuantumState::from_operator(HermitianOperator(k22, bad)), Error);
	QuantumState mixed = QuantumState::maximally_mixed(k22);
	CHECK(mixed.ppt_flag() == PptFlag::ppt);
	CHECK(mixed.purity() == doctest::Approx(0.25));
	QuantumState bell = QuantumState::pure(k22, oracle::psi());
	CHECK(bell.ppt_flag() == PptFlag::npt);
	CHECK(bell.ppt_min_eigenvalue() == doctest::Approx(-0.5));
}

TEST_CASE("see-saw product minimum examples") {
	CHECK(min_product_expectation(HermitianOperator::identity(k22)).min_value == doctest::Approx(1.0));

	HermitianOperator w = phi_witness().op();
	BlockPositivityReport r = min_product_expectation(w);
	CHECK(std::abs(r.min_value) < 1e-8);
	CHECK(std::abs(oracle::grid_product_min(w.matrix())) < 1e-3);
	CHECK(std::abs(r.min_value - w.expectation(r.argmin.vector())) < 1e-10);

	Matrix m = Matrix::Zero(4, 4);
	m(0, 0) = -1.0;
	BlockPositivityReport neg = min_product_expectation(HermitianOperator(k22, m));
	CHECK(neg.min_value == doctest::Approx(-1.0));
	CHECK(std::abs(neg.argmin.e(0)) == doctest::Approx(1.0));
	CHECK(std::abs(neg.argmin.f(0)) == doctest::Approx(1.0));

	SeeSawOptions zero;
	zero.starts = 0;
	CHECK_THROWS_AS(min_product_expectation(w, zero), Error);
}

TEST_CASE("see-saw agrees with the grid oracle and never goes up") {
	for (std::uint64_t seed = 0; seed < 20; seed++) {
		HermitianOperator x = random_hermitian(k22, seed, Ensemble::gue);
		double ss = min_product_expectation(x).min_value;
		double grid = oracle::grid_product_min(x.matrix(), 24);
		// The grid only bounds from above; the see-saw must not be worse.
		CHECK(ss <= grid + 1e-12);
		CHECK(ss >= grid - 0.05 * x.frobenius_norm());

		Rng rng(seed);
		std::vector<double> traj = seesaw_trajectory(random_hermitian(Dims{3, 3}, seed, Ensemble::gue),
			rng.product_vector(Dims{3, 3}), 30);
		for (size_t i = 1; i < traj.size(); i++) CHECK(traj[i] <= traj[i - 1] + 1e-12);
	}
}

TEST_CASE("see-saw is deterministic in the seed") {
	HermitianOperator x = random_hermitian(Dims{3, 3}, 7, Ensemble::gue);
	SeeSawOptions a;
	a.seed = 11;
	BlockPositivityReport r1 = min_product_expectation(x, a);
	BlockPositivityReport r2 = min_product_expectation(x, a);
	CHECK(r1.min_value == r2.min_value);
	CHECK(r1.best_start == r2.best_start);
	CHECK(r1.argmin.vector() == r2.argmin.vector());
}

TEST_CASE("block positivity verdicts") {
	CHECK(is_block_positive(HermitianOperator::identity(k22)).verdict == BlockPositivity::yes_evidence);
	CHECK(is_block_positive(-HermitianOperator::identity(k22)).verdict == BlockPositivity::no_certified);
	CHECK(is_block_positive(phi_witness().op()).verdict == BlockPositivity::yes_evidence);
}

TEST_CASE("witness construction checks both properties") {
	Witness w = phi_witness();
	CHECK(w.min_eigenvalue() == doctest::Approx(-0.5));
	CHECK(w.block_positivity_exact());
	CHECK_THROWS_AS(Witness::from_operator(HermitianOperator::identity(k22)), Error);
	CHECK_THROWS_AS(Witness::from_operator(-HermitianOperator::identity(k22)), Error);
	Witness checked = Witness::from_operator(w.op());
	CHECK(checked.min_product_expectation() >= -1e-9);
	Eigen::VectorXd ev = eigenvalues(w.normalized().op());
	CHECK(ev.cwiseAbs().maxCoeff() == doctest::Approx(1.0));
}

TEST_CASE("detection examples") {
	Witness w = phi_witness();
	Detection on_psi = detects(w, QuantumState::pure(k22, oracle::psi()));
	CHECK(on_psi.detected);
	CHECK(on_psi.value == doctest::Approx(-0.5));
	Detection on_mixed = detects(w, QuantumState::maximally_mixed(k22));
	CHECK_FALSE(on_mixed.detected);
	CHECK(on_mixed.value == doctest::Approx(0.25));
	for (std::uint64_t seed = 0; seed < 20; seed++) {
		QuantumState prod = QuantumState::from_operator(random_hermitian(k22, seed, Ensemble::product_state));
		CHECK(detects(w, prod).value >= -1e-12);
	}
	CHECK_THROWS_AS(detects(w, QuantumState::maximally_mixed(Dims{2, 3})), Error);
}

TEST_CASE("PPT examples") {
	CHECK(is_ppt(QuantumState::maximally_mixed(k22)));
	CHECK_FALSE(is_ppt(QuantumState::pure(k22, oracle::phi())));
	QuantumState tiles = upb_complement_state(tiles_upb());
	CHECK(is_ppt(tiles));
	CHECK(oracle::min_eig(oracle::pt(tiles.op().matrix(), Dims{3, 3})) >= -1e-12);
}

TEST_CASE("separability examples") {
	SeparabilityVerdict mixed = is_separable(QuantumState::maximally_mixed(k22));
	CHECK(mixed.verdict == Separability::separable);
	CHECK(mixed.exact);
	CHECK(is_separable(werner(0.5)).verdict == Separability::entangled);

	SearchOptions opts;
	SeparabilityVerdict tiles = is_separable(upb_complement_state(tiles_upb()), opts);
	CHECK(tiles.verdict == Separability::entangled);
	REQUIRE(tiles.witness.has_value());
	CHECK(tiles.witness->op().pairing(upb_complement_state(tiles_upb()).op()) < -1e-4);
}

TEST_CASE("separable certificates reconstruct and are never detected") {
	Witness w = phi_witness();
	for (std::uint64_t seed = 0; seed < 10; seed++) {
		// Random separable mixture of 6 product states at 2x3.
		Rng rng(seed);
		Dims d{2, 3};
		Matrix m = Matrix::Zero(6, 6);
		for (int k = 0; k < 6; k++) m += rng.uniform() * rng.product_vector(d).projector().matrix();
		QuantumState rho = QuantumState::normalized(HermitianOperator(d, m));
		SeparabilityVerdict v = is_separable(rho);
		CHECK(v.verdict == Separability::separable);
		if (v.certificate) {
			CHECK(v.residual <= 1e-7);
			CHECK(frobenius_distance(v.certificate->reconstruct(d), rho.op()) <= 1e-7);
		}
	}
	// At 2x2 every certified state pairs non-negatively with the singlet witness.
	for (double p : {0.0, 0.1, 0.2, 0.3}) {
		SeparabilityVerdict v = is_separable(werner(p));
		REQUIRE(v.certificate.has_value());
		CHECK_FALSE(detects(w, werner(p)).detected);
		for (double weight : v.certificate->weights) CHECK(weight >= 0.0);
	}
}

TEST_CASE("separability agrees with PPT at 2x2") {
	int npt = 0;
	for (std::uint64_t seed = 0; seed < 1000; seed++) {
		QuantumState rho = QuantumState::from_operator(random_hermitian(k22, seed, Ensemble::state));
		SearchOptions opts;
		opts.seesaw.starts = 8;
		opts.effort = 16;
		SeparabilityVerdict v = is_separable(rho, opts);
		bool ppt = is_ppt(rho);
		if (!ppt) npt++;
		CHECK((v.verdict == Separability::separable) == ppt);
		CHECK(v.verdict != Separability::unknown);
	}
	CHECK(npt > 100);
}

TEST_CASE("decomposition of witnesses") {
	DecompositionCertificate c = decompose_witness(phi_witness());
	CHECK(c.verdict == DecompositionVerdict::decomposable);
	CHECK(c.a == doctest::Approx(0.0).epsilon(1e-6));
	CHECK(c.residual <= 1e-7);
	HermitianOperator rebuilt = c.p * c.a + partial_transpose(c.q) * (1.0 - c.a);
	CHECK(frobenius_distance(rebuilt, phi_witness().op()) <= 1e-7);
	CHECK((c.q.matrix() - oracle::outer(oracle::phi())).norm() < 1e-5);

	for (std::uint64_t seed = 0; seed < 10; seed++) {
		// a P + (1 - a) Q^Gamma with random PSD P, Q: decomposable by construction.
		HermitianOperator p = random_hermitian(Dims{2, 3}, seed, Ensemble::state);
		HermitianOperator q = random_hermitian(Dims{2, 3}, seed + 50, Ensemble::npt_state);
		HermitianOperator w = p * 0.05 + partial_transpose(q) * 0.95;
		if (min_eigenvalue(w) >= -1e-6) continue;
		DecompositionCertificate dc = decompose_witness(Witness::from_operator(w));
		CHECK(dc.verdict == DecompositionVerdict::decomposable);
		CHECK(dc.residual <= 1e-7);
		CHECK(min_eigenvalue(dc.p) >= -1e-9 * std::max(1.0, eigenvalues(dc.p).cwiseAbs().maxCoeff()));
		CHECK(min_eigenvalue(dc.q) >= -1e-9 * std::max(1.0, eigenvalues(dc.q).cwiseAbs().maxCoeff()));
	}
}

TEST_CASE("indecomposability certificates") {
	CHECK_FALSE(indecomposability_certificate(phi_witness()).has_value());
	// A decomposable witness pairs non-negatively with every PPT state.
	HermitianOperator w = phi_witness().op();
	for (std::uint64_t seed = 0; seed < 500; seed++) {
		QuantumState rho = QuantumState::from_operator(random_hermitian(k22, seed, Ensemble::state));
		if (!is_ppt(rho)) continue;
		CHECK(w.pairing(rho.op()) >= -1e-12);
	}
	for (std::uint64_t seed = 0; seed < 10; seed++) {
		Witness rnd = Witness::from_partial_transpose(random_hermitian(k22, seed, Ensemble::npt_state));
		CHECK_FALSE(indecomposability_certificate(rnd, seed).has_value());
	}

	QuantumState tiles = upb_complement_state(tiles_upb());
	SeparabilityVerdict sv = is_separable(tiles);
	REQUIRE(sv.witness.has_value());
	auto rho = indecomposability_certificate(*sv.witness, 3);
	REQUIRE(rho.has_value());
	CHECK(rho->ppt_flag() == PptFlag::ppt);
	CHECK(sv.witness->op().pairing(rho->op()) < -1e-9);

	DecompositionCertificate dc = decompose_witness(*sv.witness);
	CHECK(dc.verdict == DecompositionVerdict::indecomposable_evidence);
	REQUIRE(dc.counterexample.has_value());
	CHECK(is_ppt(*dc.counterexample));
	CHECK(sv.witness->op().pairing(dc.counterexample->op()) < -1e-9);
	// The tiles state itself is a PPT state detected by this witness.
	CHECK(sv.witness->op().pairing(tiles.op()) < -1e-4);
}

TEST_CASE("drain terminates exactly on separable 2x3 input") {
	for (std::uint64_t seed = 0; seed < 10; seed++) {
		Rng rng(seed + 1000);
		Dims d{2, 3};
		Matrix m = Matrix::Zero(6, 6);
		for (int k = 0; k < 8; k++) m += rng.uniform() * rng.product_vector(d).projector().matrix();
		HermitianOperator x(d, m / m.trace().real());
		DrainResult r = drain_separable(x, 64);
		CHECK(std::abs(r.remainder.trace()) < 1e-8);
		CHECK(r.steps <= 36);
	}
}
