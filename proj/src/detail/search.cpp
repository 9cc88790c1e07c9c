#include "detail/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace whk::detail {

namespace {

// (<e| (x) I) M (|e> (x) I), a b x b matrix.
Matrix reduce_to_b(const Matrix& m, Dims d, const Vector& e) {
	Matrix out = Matrix::Zero(d.b, d.b);
	for (int i = 0; i < d.a; i++) {
		for (int k = 0; k < d.a; k++) {
			cplx w = std::conj(e(i)) * e(k);
			if (w == cplx(0.0)) continue;
			out += w * m.block(i * d.b, k * d.b, d.b, d.b);
		}
	}
	return (out + out.adjoint()) * 0.5;
}

// (I (x) <f|) M (I (x) |f>), an a x a matrix.
Matrix reduce_to_a(const Matrix& m, Dims d, const Vector& f) {
	Matrix out(d.a, d.a);
	for (int i = 0; i < d.a; i++) {
		for (int k = 0; k < d.a; k++) {
			out(i, k) = f.dot(m.block(i * d.b, k * d.b, d.b, d.b) * f);
		}
	}
	return (out + out.adjoint()) * 0.5;
}

struct Ground {
	double value;
	Vector vector;
};

Ground ground_state(const Matrix& m) {
	Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
	return Ground{solver.eigenvalues()(0), solver.eigenvectors().col(0)};
}

Eigen::VectorXd vectorize(const Matrix& m) {
	Eigen::VectorXd out(2 * m.size());
	for (Eigen::Index i = 0; i < m.size(); i++) {
		out(2 * i) = m.data()[i].real();
		out(2 * i + 1) = m.data()[i].imag();
	}
	return out;
}

}  // namespace

std::vector<StartResult> seesaw_all(const HermitianOperator& op, const SeeSawOptions& options) {
	if (options.starts < 1) {
		throw Error(ErrorCode::invalid_argument, "see-saw needs at least one start", "starts");
	}
	const Dims d = op.dims();
	const Matrix& m = op.matrix();
	std::vector<StartResult> results;
	results.reserve(options.starts);
	for (int s = 0; s < options.starts; s++) {
		Rng rng(mix_seed(options.seed, static_cast<std::uint64_t>(s)));
		Vector e = rng.unit_vector(d.a);
		Vector f;
		double prev = std::numeric_limits<double>::infinity();
		bool converged = false;
		for (int sweep = 0; sweep < options.max_sweeps; sweep++) {
			f = ground_state(reduce_to_b(m, d, e)).vector;
			Ground g = ground_state(reduce_to_a(m, d, f));
			e = g.vector;
			if (prev - g.value < options.convergence) {
				converged = true;
				break;
			}
			prev = g.value;
		}
		ProductVector pv = ProductVector::make(e, f);
		results.push_back(StartResult{op.expectation(pv.vector()), std::move(pv), converged});
	}
	return results;
}

ProductVector seesaw_from(const Matrix& m, Dims d, const ProductVector& start, int sweeps) {
	Vector e = start.e;
	Vector f = start.f;
	for (int sweep = 0; sweep < sweeps; sweep++) {
		f = ground_state(reduce_to_b(m, d, e)).vector;
		e = ground_state(reduce_to_a(m, d, f)).vector;
	}
	return ProductVector::make(e, f);
}

RangeData range_data(const HermitianOperator& op, double tol) {
	Spectrum s = spectrum(op);
	double cut = scaled_tolerance(s, tol);
	const int n = op.size();
	Matrix proj = Matrix::Zero(n, n);
	Matrix pinv = Matrix::Zero(n, n);
	int rank = 0;
	for (int i = 0; i < n; i++) {
		if (s.values(i) > cut) {
			Vector v = s.vectors.col(i);
			Matrix vv = v * v.adjoint();
			proj += vv;
			pinv += vv / s.values(i);
			rank++;
		}
	}
	return RangeData{HermitianOperator(op.dims(), (proj + proj.adjoint()) * 0.5),
		HermitianOperator(op.dims(), (pinv + pinv.adjoint()) * 0.5), rank};
}

ConeProjection project_onto_cone(const Matrix& target, const std::vector<Matrix>& generators, int max_iter) {
	const Eigen::Index n = static_cast<Eigen::Index>(generators.size());
	Eigen::VectorXd b = vectorize(target);
	Eigen::MatrixXd a(b.size(), n);
	for (Eigen::Index j = 0; j < n; j++) a.col(j) = vectorize(generators[j]);

	ConeProjection out;
	Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
	std::vector<bool> passive(n, false);
	const double eps = 1e-12 * std::max(1.0, a.norm()) * std::max(1.0, b.norm());

	auto solve_passive = [&](Eigen::VectorXd& z) {
		std::vector<Eigen::Index> idx;
		for (Eigen::Index j = 0; j < n; j++) {
			if (passive[j]) idx.push_back(j);
		}
		Eigen::MatrixXd ap(a.rows(), static_cast<Eigen::Index>(idx.size()));
		for (size_t k = 0; k < idx.size(); k++) ap.col(k) = a.col(idx[k]);
		Eigen::VectorXd zp = ap.colPivHouseholderQr().solve(b);
		z = Eigen::VectorXd::Zero(n);
		for (size_t k = 0; k < idx.size(); k++) z(idx[k]) = zp(k);
	};

	for (int outer = 0; outer < max_iter; outer++) {
		out.iterations = outer + 1;
		Eigen::VectorXd w = a.transpose() * (b - a * x);
		Eigen::Index best = -1;
		double best_w = eps;
		for (Eigen::Index j = 0; j < n; j++) {
			if (!passive[j] && w(j) > best_w) {
				best_w = w(j);
				best = j;
			}
		}
		if (best < 0) break;
		passive[best] = true;
		for (int inner = 0; inner < 4 * n + 8; inner++) {
			Eigen::VectorXd z;
			solve_passive(z);
			bool all_positive = true;
			for (Eigen::Index j = 0; j < n; j++) {
				if (passive[j] && z(j) <= 0.0) all_positive = false;
			}
			if (all_positive) {
				x = z;
				break;
			}
			double alpha = 1.0;
			for (Eigen::Index j = 0; j < n; j++) {
				if (passive[j] && z(j) <= 0.0) alpha = std::min(alpha, x(j) / (x(j) - z(j)));
			}
			x += alpha * (z - x);
			for (Eigen::Index j = 0; j < n; j++) {
				if (passive[j] && x(j) <= 1e-15) {
					passive[j] = false;
					x(j) = 0.0;
				}
			}
		}
	}

	out.coefficients = x;
	out.nearest = Matrix::Zero(target.rows(), target.cols());
	for (Eigen::Index j = 0; j < n; j++) {
		if (x(j) != 0.0) out.nearest += x(j) * generators[j];
	}
	out.distance = (target - out.nearest).norm();
	return out;
}

Witness npt_witness(const QuantumState& rho) {
	Spectrum s = spectrum(partial_transpose(rho.op()));
	return Witness::from_partial_transpose(HermitianOperator::projector(rho.dims(), s.ground()));
}

}  // namespace whk::detail
