#include "detail/lmi.hpp"

#include <cmath>
#include <limits>
#include <optional>

namespace whk::detail {

Matrix AffineLmi::evaluate(const Eigen::VectorXd& y) const {
	Matrix f = constant;
	for (size_t k = 0; k < coeffs.size(); k++) {
		if (y(k) != 0.0) f += y(k) * coeffs[k];
	}
	return f;
}

namespace {

// log det F, or nullopt when F is not positive definite.
std::optional<double> log_det_pd(const Matrix& f) {
	Eigen::LLT<Matrix> llt(f);
	if (llt.info() != Eigen::Success) return std::nullopt;
	double acc = 0.0;
	const Matrix& l = llt.matrixLLT();
	for (Eigen::Index i = 0; i < l.rows(); i++) {
		double d = l(i, i).real();
		if (!(d > 0.0)) return std::nullopt;
		acc += std::log(d);
	}
	return 2.0 * acc;
}

struct Barrier {
	const Eigen::VectorXd& c;
	const std::vector<AffineLmi>& constraints;

	std::optional<double> value(const Eigen::VectorXd& y, double t) const {
		double v = -t * c.dot(y);
		for (const auto& lmi : constraints) {
			auto ld = log_det_pd(lmi.evaluate(y));
			if (!ld) return std::nullopt;
			v -= *ld;
		}
		return v;
	}

	void derivatives(const Eigen::VectorXd& y, double t, Eigen::VectorXd& g, Eigen::MatrixXd& h) const {
		const Eigen::Index n = y.size();
		g = -t * c;
		h = Eigen::MatrixXd::Zero(n, n);
		std::vector<Matrix> p(n);
		for (const auto& lmi : constraints) {
			Matrix f = lmi.evaluate(y);
			Eigen::LLT<Matrix> llt(f);
			for (Eigen::Index k = 0; k < n; k++) {
				p[k] = llt.solve(lmi.coeffs[k]);
				g(k) -= p[k].trace().real();
			}
			for (Eigen::Index k = 0; k < n; k++) {
				Matrix pkt = p[k].transpose();
				for (Eigen::Index l = k; l < n; l++) {
					double v = (pkt.array() * p[l].array()).sum().real();
					h(k, l) += v;
					if (l != k) h(l, k) += v;
				}
			}
		}
	}
};

}  // namespace

LmiResult maximize(const Eigen::VectorXd& c, const std::vector<AffineLmi>& constraints,
	Eigen::VectorXd start, const LmiOptions& options) {
	Barrier barrier{c, constraints};
	LmiResult result;
	result.y = std::move(start);
	if (!barrier.value(result.y, options.t0)) {
		throw Error(ErrorCode::invalid_argument, "barrier start point is not strictly feasible");
	}
	double m = 0.0;
	for (const auto& lmi : constraints) m += static_cast<double>(lmi.constant.rows());

	Eigen::VectorXd g;
	Eigen::MatrixXd h;
	double t = options.t0;
	while (true) {
		for (int it = 0; it < options.max_newton; it++) {
			barrier.derivatives(result.y, t, g, h);
			Eigen::VectorXd dy = -h.ldlt().solve(g);
			if (!dy.allFinite()) break;
			double decrement = -g.dot(dy);
			result.newton_steps++;
			if (decrement * 0.5 < 1e-10) break;
			double f0 = *barrier.value(result.y, t);
			double s = 1.0;
			bool moved = false;
			while (s > 1e-14) {
				auto f1 = barrier.value(result.y + s * dy, t);
				if (f1 && *f1 <= f0 - 0.25 * s * decrement) {
					moved = true;
					break;
				}
				s *= 0.5;
			}
			if (!moved) break;
			result.y += s * dy;
		}
		result.objective = c.dot(result.y);
		if (result.objective > options.stop_above) break;
		if (m / t < options.gap) {
			result.converged = true;
			break;
		}
		t *= options.growth;
	}
	result.objective = c.dot(result.y);
	return result;
}

std::vector<Matrix> hermitian_basis(int n) {
	std::vector<Matrix> basis;
	basis.reserve(static_cast<size_t>(n) * n);
	const double r = 1.0 / std::sqrt(2.0);
	for (int i = 0; i < n; i++) {
		Matrix e = Matrix::Zero(n, n);
		e(i, i) = 1.0;
		basis.push_back(std::move(e));
	}
	for (int i = 0; i < n; i++) {
		for (int j = i + 1; j < n; j++) {
			Matrix s = Matrix::Zero(n, n);
			s(i, j) = r;
			s(j, i) = r;
			basis.push_back(std::move(s));
			Matrix a = Matrix::Zero(n, n);
			a(i, j) = cplx(0.0, r);
			a(j, i) = cplx(0.0, -r);
			basis.push_back(std::move(a));
		}
	}
	return basis;
}

std::vector<Matrix> traceless_hermitian_basis(int n) {
	std::vector<Matrix> basis;
	for (int l = 1; l < n; l++) {
		Matrix d = Matrix::Zero(n, n);
		double norm = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
		for (int i = 0; i < l; i++) d(i, i) = norm;
		d(l, l) = -l * norm;
		basis.push_back(std::move(d));
	}
	auto full = hermitian_basis(n);
	for (size_t k = static_cast<size_t>(n); k < full.size(); k++) basis.push_back(std::move(full[k]));
	return basis;
}

}  // namespace whk::detail
