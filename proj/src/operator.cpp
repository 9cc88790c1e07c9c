#include "whk/operator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace whk {

const char* to_string(ErrorCode code) {
	switch (code) {
		case ErrorCode::malformed_operator: return "malformed_operator";
		case ErrorCode::not_positive: return "not_positive";
		case ErrorCode::invalid_argument: return "invalid_argument";
		case ErrorCode::dims_mismatch: return "dims_mismatch";
		case ErrorCode::generation_failure: return "generation_failure";
		case ErrorCode::precondition: return "precondition";
		case ErrorCode::no_witness_exists: return "no_witness_exists";
		case ErrorCode::inconclusive: return "inconclusive";
		case ErrorCode::stratum_violation: return "stratum_violation";
		case ErrorCode::not_in_observables: return "not_in_observables";
		case ErrorCode::inconsistency: return "inconsistency";
		case ErrorCode::indistinguishable: return "indistinguishable";
		case ErrorCode::no_separator_found: return "no_separator_found";
		case ErrorCode::schema: return "schema";
	}
	return "unknown";
}

void Dims::validate() const {
	if (a < 2 || b < 2) {
		throw Error(ErrorCode::invalid_argument,
			"subsystem dimensions must be at least 2, got " + std::to_string(a) + "x" + std::to_string(b), "dims");
	}
}

HermitianOperator::HermitianOperator(Dims dims, Matrix entries) : dims_(dims) {
	dims.validate();
	if (entries.rows() != dims.total() || entries.cols() != dims.total()) {
		throw Error(ErrorCode::malformed_operator,
			"operator is " + std::to_string(entries.rows()) + "x" + std::to_string(entries.cols()) +
			" but dims require side " + std::to_string(dims.total()), "entries");
	}
	if (!entries.allFinite()) {
		throw Error(ErrorCode::malformed_operator, "operator has non-finite entries", "entries");
	}
	double scale = entries.cwiseAbs().maxCoeff();
	double dev = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
	if (dev > 1e-12 * (1.0 + scale)) {
		throw Error(ErrorCode::malformed_operator,
			"operator is not Hermitian (deviation " + std::to_string(dev) + ")", "entries");
	}
	m_ = (entries + entries.adjoint()) * 0.5;
}

HermitianOperator::HermitianOperator(Dims dims, Matrix entries, trusted_t) : dims_(dims), m_(std::move(entries)) {}

HermitianOperator HermitianOperator::zero(Dims dims) {
	dims.validate();
	return HermitianOperator(dims, Matrix::Zero(dims.total(), dims.total()), trusted_t{});
}

HermitianOperator HermitianOperator::identity(Dims dims) {
	dims.validate();
	return HermitianOperator(dims, Matrix::Identity(dims.total(), dims.total()), trusted_t{});
}

HermitianOperator HermitianOperator::projector(Dims dims, const Vector& v) {
	dims.validate();
	if (v.size() != dims.total()) {
		throw Error(ErrorCode::dims_mismatch, "vector length does not match dims", "vector");
	}
	double n = v.norm();
	if (n == 0.0) {
		throw Error(ErrorCode::invalid_argument, "cannot project onto the zero vector", "vector");
	}
	Vector u = v / n;
	Matrix p = u * u.adjoint();
	p = (p + p.adjoint()) * 0.5;
	return HermitianOperator(dims, std::move(p), trusted_t{});
}

double HermitianOperator::pairing(const HermitianOperator& other) const {
	require_same_dims(*this, other);
	// tr(AB) = sum_ij A_ij B_ji = sum_ij A_ij conj(B_ij) for Hermitian B.
	return (m_.array() * other.m_.conjugate().array()).sum().real();
}

double HermitianOperator::expectation(const Vector& v) const {
	return v.dot(m_ * v).real();
}

double HermitianOperator::max_abs_entry() const { return m_.cwiseAbs().maxCoeff(); }

HermitianOperator HermitianOperator::operator+(const HermitianOperator& o) const {
	require_same_dims(*this, o);
	return HermitianOperator(dims_, m_ + o.m_, trusted_t{});
}

HermitianOperator HermitianOperator::operator-(const HermitianOperator& o) const {
	require_same_dims(*this, o);
	return HermitianOperator(dims_, m_ - o.m_, trusted_t{});
}

HermitianOperator HermitianOperator::operator*(double s) const {
	return HermitianOperator(dims_, m_ * s, trusted_t{});
}

double frobenius_distance(const HermitianOperator& x, const HermitianOperator& y) {
	require_same_dims(x, y);
	return (x.matrix() - y.matrix()).norm();
}

void require_same_dims(const HermitianOperator& x, const HermitianOperator& y) {
	if (!(x.dims() == y.dims())) {
		throw Error(ErrorCode::dims_mismatch, "operators carry different dims");
	}
}

ProductVector ProductVector::make(Vector e, Vector f) {
	double ne = e.norm();
	double nf = f.norm();
	if (ne == 0.0 || nf == 0.0) {
		throw Error(ErrorCode::invalid_argument, "product vector factor is zero");
	}
	return ProductVector{e / ne, f / nf};
}

ProductVector ProductVector::basis(Dims dims, int i, int j) {
	Vector e = Vector::Zero(dims.a);
	Vector f = Vector::Zero(dims.b);
	e(i) = 1.0;
	f(j) = 1.0;
	return ProductVector{e, f};
}

Vector ProductVector::vector() const { return kron(e, f); }

Vector ProductVector::conjugated_vector() const { return kron(e, Vector(f.conjugate())); }

HermitianOperator ProductVector::projector() const { return HermitianOperator::projector(dims(), vector()); }

Vector kron(const Vector& x, const Vector& y) {
	Vector out(x.size() * y.size());
	for (Eigen::Index i = 0; i < x.size(); i++) {
		out.segment(i * y.size(), y.size()) = x(i) * y;
	}
	return out;
}

Matrix kron(const Matrix& x, const Matrix& y) {
	Matrix out(x.rows() * y.rows(), x.cols() * y.cols());
	for (Eigen::Index i = 0; i < x.rows(); i++) {
		for (Eigen::Index j = 0; j < x.cols(); j++) {
			out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
		}
	}
	return out;
}

HermitianOperator partial_transpose(const HermitianOperator& op) {
	const int da = op.dims().a;
	const int db = op.dims().b;
	const Matrix& m = op.matrix();
	Matrix out(m.rows(), m.cols());
	// <i j| X^T_B |k l> = <i l| X |k j>
	for (int i = 0; i < da; i++) {
		for (int j = 0; j < db; j++) {
			for (int k = 0; k < da; k++) {
				for (int l = 0; l < db; l++) {
					out(i * db + j, k * db + l) = m(i * db + l, k * db + j);
				}
			}
		}
	}
	return HermitianOperator(op.dims(), std::move(out));
}

HermitianOperator partial_transpose_a(const HermitianOperator& op) {
	const int da = op.dims().a;
	const int db = op.dims().b;
	const Matrix& m = op.matrix();
	Matrix out(m.rows(), m.cols());
	for (int i = 0; i < da; i++) {
		for (int j = 0; j < db; j++) {
			for (int k = 0; k < da; k++) {
				for (int l = 0; l < db; l++) {
					out(i * db + j, k * db + l) = m(k * db + j, i * db + l);
				}
			}
		}
	}
	return HermitianOperator(op.dims(), std::move(out));
}

Spectrum spectrum(const HermitianOperator& op) {
	Eigen::SelfAdjointEigenSolver<Matrix> solver(op.matrix());
	if (solver.info() != Eigen::Success) {
		throw Error(ErrorCode::malformed_operator, "eigensolver failed to converge");
	}
	return Spectrum{solver.eigenvalues(), solver.eigenvectors()};
}

Eigen::VectorXd eigenvalues(const HermitianOperator& op) {
	Eigen::SelfAdjointEigenSolver<Matrix> solver(op.matrix(), Eigen::EigenvaluesOnly);
	return solver.eigenvalues();
}

double min_eigenvalue(const HermitianOperator& op) { return eigenvalues(op)(0); }

double scaled_tolerance(const Spectrum& s, double tol) {
	double scale = s.max_abs();
	return tol * (scale > 0.0 ? scale : 1.0);
}

bool is_psd(const HermitianOperator& op, double tol) {
	Eigen::VectorXd ev = eigenvalues(op);
	double scale = ev.cwiseAbs().maxCoeff();
	return ev(0) >= -tol * (scale > 0.0 ? scale : 1.0);
}

namespace {

Spectrum checked_psd_spectrum(const HermitianOperator& op, double rank_tol) {
	Spectrum s = spectrum(op);
	double scale = s.max_abs();
	if (s.min() < -rank_tol * scale) {
		throw Error(ErrorCode::not_positive,
			"operator has eigenvalue " + std::to_string(s.min()) + " below -rank_tol * lambda_max");
	}
	return s;
}

}  // namespace

Matrix range_basis(const HermitianOperator& op, double rank_tol) {
	Spectrum s = checked_psd_spectrum(op, rank_tol);
	double cut = rank_tol * s.max_abs();
	std::vector<int> keep;
	for (int i = 0; i < s.values.size(); i++) {
		if (s.values(i) > cut) keep.push_back(i);
	}
	Matrix basis(op.size(), static_cast<Eigen::Index>(keep.size()));
	for (size_t c = 0; c < keep.size(); c++) basis.col(c) = s.vectors.col(keep[c]);
	return basis;
}

HermitianOperator range_projector(const HermitianOperator& op, double rank_tol) {
	Matrix v = range_basis(op, rank_tol);
	return HermitianOperator(op.dims(), v * v.adjoint());
}

HermitianOperator pseudo_inverse(const HermitianOperator& op, double rank_tol) {
	Spectrum s = checked_psd_spectrum(op, rank_tol);
	double cut = rank_tol * s.max_abs();
	Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.values.size());
	for (int i = 0; i < s.values.size(); i++) {
		if (s.values(i) > cut) inv(i) = 1.0 / s.values(i);
	}
	Matrix m = s.vectors * inv.asDiagonal() * s.vectors.adjoint();
	return HermitianOperator(op.dims(), (m + m.adjoint()) * 0.5);
}

HermitianOperator psd_part(const HermitianOperator& op) {
	Spectrum s = spectrum(op);
	Eigen::VectorXd clipped = s.values.cwiseMax(0.0);
	Matrix m = s.vectors * clipped.asDiagonal() * s.vectors.adjoint();
	return HermitianOperator(op.dims(), (m + m.adjoint()) * 0.5);
}

Eigen::VectorXd schmidt_coefficients(Dims dims, const Vector& v) {
	if (v.size() != dims.total()) {
		throw Error(ErrorCode::dims_mismatch, "vector length does not match dims");
	}
	// Row-major reshape: coefficient of |i>|j> sits at v(i * b + j).
	Matrix c(dims.a, dims.b);
	for (int i = 0; i < dims.a; i++) {
		for (int j = 0; j < dims.b; j++) c(i, j) = v(i * dims.b + j);
	}
	Eigen::JacobiSVD<Matrix> svd(c);
	return svd.singularValues();
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
	std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
	z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
	z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
	return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed) : engine_(mix_seed(seed, 0)) {}

Vector Rng::complex_gaussian(int n) {
	Vector v(n);
	for (int i = 0; i < n; i++) {
		double re = normal();
		double im = normal();
		v(i) = cplx(re, im);
	}
	return v;
}

Vector Rng::unit_vector(int n) {
	Vector v = complex_gaussian(n);
	return v / v.norm();
}

Matrix Rng::ginibre(int rows, int cols) {
	Matrix g(rows, cols);
	for (int j = 0; j < cols; j++) {
		for (int i = 0; i < rows; i++) {
			double re = normal();
			double im = normal();
			g(i, j) = cplx(re, im);
		}
	}
	return g;
}

ProductVector Rng::product_vector(Dims dims) {
	Vector e = unit_vector(dims.a);
	Vector f = unit_vector(dims.b);
	return ProductVector{e, f};
}

namespace {

HermitianOperator hilbert_schmidt_state(Dims dims, Rng& rng) {
	Matrix g = rng.ginibre(dims.total(), dims.total());
	Matrix rho = g * g.adjoint();
	rho /= rho.trace().real();
	return HermitianOperator(dims, (rho + rho.adjoint()) * 0.5);
}

}  // namespace

HermitianOperator random_hermitian(Dims dims, std::uint64_t seed, Ensemble ensemble) {
	dims.validate();
	Rng rng(seed);
	switch (ensemble) {
		case Ensemble::gue: {
			Matrix g = rng.ginibre(dims.total(), dims.total());
			return HermitianOperator(dims, (g + g.adjoint()) * 0.5);
		}
		case Ensemble::state:
			return hilbert_schmidt_state(dims, rng);
		case Ensemble::product_state:
			return rng.product_vector(dims).projector();
		case Ensemble::npt_state: {
			constexpr int kBudget = 1000;
			for (int attempt = 0; attempt < kBudget; attempt++) {
				HermitianOperator rho = hilbert_schmidt_state(dims, rng);
				if (min_eigenvalue(partial_transpose(rho)) < -1e-6) return rho;
			}
			throw Error(ErrorCode::generation_failure,
				"no NPT state found after " + std::to_string(kBudget) + " draws");
		}
	}
	throw Error(ErrorCode::invalid_argument, "unknown ensemble");
}

}  // namespace whk
