#include "test_util.hpp"

#include "whk/operator.hpp"

#include <doctest.h>

using namespace whk;

namespace {

const Dims k22{2, 2};

HermitianOperator op(const Matrix& m, Dims d = k22) { return HermitianOperator(d, m); }

}  // namespace

TEST_CASE("construction rejects malformed input") {
	Matrix m = Matrix::Identity(4, 4);
	CHECK_THROWS_AS(HermitianOperator(Dims{2, 3}, m), Error);
	m(0, 1) = cplx(0.0, 1.0);
	try {
		HermitianOperator(k22, m);
		FAIL("non-Hermitian input accepted");
	} catch (const Error& e) {
		CHECK(e.code() == ErrorCode::malformed_operator);
	}
	CHECK_THROWS_AS(HermitianOperator(Dims{1, 4}, Matrix::Identity(4, 4)), Error);
	// Within tolerance: accepted and symmetrized exactly.
	Matrix near = Matrix::Identity(4, 4);
	near(0, 1) = 1e-14;
	HermitianOperator h(k22, near);
	CHECK(h.matrix() == h.matrix().adjoint());
}

TEST_CASE("partial transpose examples") {
	CHECK(partial_transpose(HermitianOperator::identity(k22)).matrix().isApprox(Matrix::Identity(4, 4)));

	Eigen::VectorXd ev = eigenvalues(partial_transpose(HermitianOperator::projector(k22, oracle::psi())));
	CHECK(ev(0) == doctest::Approx(-0.5).epsilon(1e-12));
	for (int i = 1; i < 4; i++) CHECK(ev(i) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("partial transpose matches the index-loop oracle and is linear, involutive, trace preserving") {
	for (Dims d : {Dims{2, 2}, Dims{2, 3}, Dims{3, 2}, Dims{3, 3}}) {
		for (std::uint64_t seed = 0; seed < 10; seed++) {
			HermitianOperator x = random_hermitian(d, seed, Ensemble::gue);
			HermitianOperator y = random_hermitian(d, seed + 100, Ensemble::gue);
			Matrix expect = oracle::pt(x.matrix(), d);
			CHECK((partial_transpose(x).matrix() - expect).cwiseAbs().maxCoeff() < 1e-14);
			CHECK((partial_transpose(partial_transpose(x)).matrix() - x.matrix()).cwiseAbs().maxCoeff() < 1e-14);
			CHECK(std::abs(partial_transpose(x).trace() - x.trace()) < 1e-12);
			double a = 0.7;
			double b = -1.3;
			HermitianOperator lhs = partial_transpose(x * a + y * b);
			HermitianOperator rhs = partial_transpose(x) * a + partial_transpose(y) * b;
			CHECK((lhs.matrix() - rhs.matrix()).cwiseAbs().maxCoeff() < 1e-12);
			// Transposing A instead of B gives the full transpose of X^T_B, so the spectra agree.
			Eigen::VectorXd eb = eigenvalues(partial_transpose(x));
			Eigen::VectorXd ea = eigenvalues(partial_transpose_a(x));
			CHECK((eb - ea).cwiseAbs().maxCoeff() < 1e-10);
		}
	}
}

TEST_CASE("spectrum invariants") {
	Spectrum id = spectrum(HermitianOperator::identity(k22));
	for (int i = 0; i < 4; i++) CHECK(id.values(i) == doctest::Approx(1.0));

	Matrix diag = Matrix::Zero(4, 4);
	diag.diagonal() << -1, 3, 0, 2;
	Spectrum s = spectrum(op(diag));
	CHECK(s.values(0) == doctest::Approx(-1.0));
	CHECK(s.values(1) == doctest::Approx(0.0));
	CHECK(s.values(2) == doctest::Approx(2.0));
	CHECK(s.values(3) == doctest::Approx(3.0));

	Spectrum pr = spectrum(HermitianOperator::projector(k22, oracle::phi()));
	CHECK(std::abs(pr.values(0)) < 1e-14);
	CHECK(pr.values(3) == doctest::Approx(1.0));

	for (std::uint64_t seed = 0; seed < 20; seed++) {
		HermitianOperator x = random_hermitian(Dims{3, 3}, seed, Ensemble::gue);
		Spectrum sx = spectrum(x);
		Matrix rebuilt = sx.vectors * sx.values.cast<cplx>().asDiagonal() * sx.vectors.adjoint();
		CHECK((rebuilt - x.matrix()).norm() / x.matrix().norm() < 1e-9);
		CHECK((sx.vectors.adjoint() * sx.vectors - Matrix::Identity(9, 9)).cwiseAbs().maxCoeff() < 1e-10);
		for (int i = 1; i < 9; i++) CHECK(sx.values(i - 1) <= sx.values(i));
	}
}

TEST_CASE("range projector and pseudo-inverse") {
	CHECK(range_projector(HermitianOperator::identity(k22)).matrix().isApprox(Matrix::Identity(4, 4)));
	HermitianOperator singlet = HermitianOperator::projector(k22, oracle::phi());
	CHECK((range_projector(singlet).matrix() - singlet.matrix()).norm() < 1e-12);
	HermitianOperator w = op(oracle::werner(0.5));
	CHECK(range_projector(w).matrix().isApprox(Matrix::Identity(4, 4), 1e-12));

	Matrix d2 = Matrix::Zero(4, 4);
	d2(0, 0) = 2.0;
	Matrix inv = pseudo_inverse(op(d2)).matrix();
	CHECK(inv(0, 0).real() == doctest::Approx(0.5));
	CHECK(inv.cwiseAbs().sum() == doctest::Approx(0.5));

	Matrix direct = oracle::werner(0.5).inverse();
	CHECK((pseudo_inverse(w).matrix() - direct).norm() < 1e-10);

	CHECK_THROWS_AS(range_projector(op(-Matrix::Identity(4, 4))), Error);

	for (std::uint64_t seed = 0; seed < 20; seed++) {
		HermitianOperator rho = random_hermitian(Dims{2, 3}, seed, Ensemble::state);
		// Rank-deficient PSD: a random state of rank 2 in C^6.
		Rng rng(seed);
		Matrix g = rng.ginibre(6, 2);
		HermitianOperator low(Dims{2, 3}, g * g.adjoint());
		for (const auto& x : {rho, low}) {
			HermitianOperator p = range_projector(x);
			CHECK((p.matrix() * p.matrix() - p.matrix()).norm() < 1e-10);
			CHECK((p.matrix() * x.matrix() - x.matrix()).norm() / x.frobenius_norm() < 1e-9);
			Matrix pinv = pseudo_inverse(x).matrix();
			CHECK((x.matrix() * pinv * x.matrix() - x.matrix()).norm() / x.frobenius_norm() < 1e-9);
		}
	}
}

TEST_CASE("random generation contracts") {
	for (auto e : {Ensemble::gue, Ensemble::state, Ensemble::product_state, Ensemble::npt_state}) {
		HermitianOperator a = random_hermitian(k22, 42, e);
		HermitianOperator b = random_hermitian(k22, 42, e);
		CHECK(a.matrix() == b.matrix());
	}
	for (std::uint64_t seed = 0; seed < 50; seed++) {
		HermitianOperator s = random_hermitian(Dims{2, 3}, seed, Ensemble::state);
		CHECK(std::abs(s.trace() - 1.0) < 1e-12);
		CHECK(min_eigenvalue(s) >= -1e-12);
		HermitianOperator p = random_hermitian(k22, seed, Ensemble::product_state);
		CHECK((p.matrix() * p.matrix() - p.matrix()).norm() < 1e-12);
		CHECK(min_eigenvalue(partial_transpose(p)) >= -1e-12);
		HermitianOperator n = random_hermitian(k22, seed, Ensemble::npt_state);
		CHECK(oracle::min_eig(oracle::pt(n.matrix(), k22)) < -1e-6);
	}
	CHECK(random_hermitian(k22, 1, Ensemble::state).matrix() != random_hermitian(k22, 2, Ensemble::state).matrix());
}

TEST_CASE("schmidt coefficients and product vectors") {
	Eigen::VectorXd s = schmidt_coefficients(k22, oracle::psi());
	CHECK(s(0) == doctest::Approx(oracle::kR2));
	CHECK(s(1) == doctest::Approx(oracle::kR2));
	ProductVector pv = ProductVector::make(oracle::ket({1, 1}), oracle::ket({0, 2}));
	CHECK(pv.e.norm() == doctest::Approx(1.0));
	CHECK(pv.f.norm() == doctest::Approx(1.0));
	Eigen::VectorXd sp = schmidt_coefficients(k22, pv.vector());
	CHECK(sp(1) < 1e-12);
	CHECK_THROWS_AS(ProductVector::make(Vector::Zero(2), oracle::ket({1, 0})), Error);
}
