#include "whk/order.hpp"

#include "detail/lmi.hpp"
#include "detail/search.hpp"
#include "whk/hierarchy.hpp"

#include <algorithm>
#include <cmath>

namespace whk {

namespace {

double abs_scale(const HermitianOperator& op) {
	double s = eigenvalues(op).cwiseAbs().maxCoeff();
	return s > 0.0 ? s : 1.0;
}

bool certified_separable(const QuantumState& rho, const SearchOptions& options) {
	return is_separable(rho, options).verdict == Separability::separable;
}

bool certified_entangled(const QuantumState& rho, const SearchOptions& options) {
	return is_separable(rho, options).verdict == Separability::entangled;
}

// max tr X over 0 <= X <= rho with X^Gamma >= 0, with X = V Y V^dagger on
// range(rho). A rank-deficient rho may leave no strictly feasible point, so
// the PPT constraint is relaxed to X^Gamma + eta I >= 0 there.
HermitianOperator ppt_part(const HermitianOperator& rho, double tol) {
	const Dims d = rho.dims();
	const int n = d.total();
	Spectrum s = spectrum(rho);
	double cut = scaled_tolerance(s, tol);
	std::vector<int> keep;
	for (int i = 0; i < n; i++) {
		if (s.values(i) > cut) keep.push_back(i);
	}
	const int r = static_cast<int>(keep.size());
	if (r == 0) return HermitianOperator::zero(d);
	Matrix v(n, r);
	Eigen::VectorXd lam(r);
	for (int k = 0; k < r; k++) {
		v.col(k) = s.vectors.col(keep[k]);
		lam(k) = s.values(keep[k]);
	}
	const bool full = r == n;
	const double eta = full ? 0.0 : 1e-10;

	auto basis = detail::hermitian_basis(r);
	detail::AffineLmi lower{Matrix::Zero(r, r), {}};
	detail::AffineLmi upper{Matrix(lam.cast<cplx>().asDiagonal()), {}};
	detail::AffineLmi ppt{Matrix::Identity(n, n) * eta, {}};
	Eigen::VectorXd c(static_cast<Eigen::Index>(basis.size()));
	for (size_t k = 0; k < basis.size(); k++) {
		lower.coeffs.push_back(basis[k]);
		upper.coeffs.push_back(-basis[k]);
		Matrix lifted = v * basis[k] * v.adjoint();
		ppt.coeffs.push_back(partial_transpose(HermitianOperator(d, (lifted + lifted.adjoint()) * 0.5)).matrix());
		c(k) = basis[k].trace().real();
	}
	double y0 = full ? lam.minCoeff() / 2.0 : eta / (2.0 * n);
	// Diagonal basis elements come first, so y0 * I is y0 on the first r entries.
	Eigen::VectorXd start = Eigen::VectorXd::Zero(c.size());
	start.head(r).setConstant(y0);

	detail::LmiOptions lmi;
	lmi.gap = 1e-11;
	detail::LmiResult res = detail::maximize(c, {lower, upper, ppt}, start, lmi);
	Matrix y = lower.evaluate(res.y);
	Matrix x = v * y * v.adjoint();
	return HermitianOperator(d, (x + x.adjoint()) * 0.5);
}

struct TailStep {
	double weight;
	ProductVector vector;
};

// Product vector in range(r) with the largest PSD-preserving weight
// 1 / <v|r^+|v>, if the range contains one.
std::optional<TailStep> range_product_step(const HermitianOperator& r, const SeeSawOptions& options) {
	detail::RangeData data = detail::range_data(r, 1e-7);
	if (data.rank == 0) return std::nullopt;
	HermitianOperator gap = HermitianOperator::identity(r.dims()) - data.projector;
	auto runs = detail::seesaw_all(gap, options);
	std::optional<TailStep> best;
	for (const auto& run : runs) {
		if (run.value > 1e-9) continue;
		double inv = data.pinv.expectation(run.vector.vector());
		if (!(inv > 0.0)) continue;
		double w = 1.0 / inv;
		if (!best || w > best->weight) best = TailStep{w, run.vector};
	}
	return best;
}

}  // namespace

bool in_witnessed_set(const HermitianOperator& w, const QuantumState& rho, double tol) {
	require_same_dims(w, rho.op());
	double tau = tol * abs_scale(w);
	if (is_psd(w, tol)) return false;
	return w.pairing(rho.op()) < -tau;
}

std::vector<HermitianOperator> sample_witnessed_set(const QuantumState& rho, int count, std::uint64_t seed,
	const SearchOptions& options) {
	std::vector<HermitianOperator> out;
	const Dims d = rho.dims();
	Rng rng(seed);
	std::optional<HermitianOperator> base;
	Vector n;
	const bool npt = rho.ppt_flag() == PptFlag::npt;
	if (npt) {
		n = spectrum(partial_transpose(rho.op())).ground();
	} else {
		try {
			base = witness_for(rho, options).op();
		} catch (const Error&) {
			return out;
		}
	}
	const int budget = 200 * std::max(count, 1);
	for (int attempt = 0; attempt < budget && static_cast<int>(out.size()) < count; attempt++) {
		HermitianOperator w = HermitianOperator::zero(d);
		if (npt) {
			Vector m = n + (0.5 * rng.uniform()) * rng.complex_gaussian(d.total());
			w = partial_transpose(HermitianOperator::projector(d, m.normalized()));
		} else {
			w = *base;
		}
		// Mixing with a PSD operator keeps block-positivity.
		double q = 0.5 + 0.5 * rng.uniform();
		Matrix g = rng.ginibre(d.total(), d.total());
		Matrix sigma = g * g.adjoint();
		sigma /= sigma.trace().real();
		w = w * q + HermitianOperator(d, (sigma + sigma.adjoint()) * 0.5) * ((1.0 - q) * abs_scale(w));
		if (in_witnessed_set(w, rho, options.tol)) out.push_back(w);
	}
	return out;
}

DeltaResult delta(const QuantumState& rho1, const QuantumState& rho2, double tol) {
	require_same_dims(rho1.op(), rho2.op());
	DeltaResult out;
	Matrix v = range_basis(rho1.op(), tol);
	Matrix p = v * v.adjoint();
	const Matrix& m2 = rho2.op().matrix();
	double leak = (m2 - p * m2).trace().real();
	if (leak > tol) {
		out.support_contained = false;
		return out;
	}
	out.support_contained = true;
	Matrix a = v.adjoint() * rho1.op().matrix() * v;
	Matrix b = v.adjoint() * m2 * v;
	Eigen::SelfAdjointEigenSolver<Matrix> ea((a + a.adjoint()) * 0.5);
	Eigen::VectorXd inv_sqrt = ea.eigenvalues().cwiseSqrt().cwiseInverse();
	Matrix a_inv_sqrt = ea.eigenvectors() * inv_sqrt.cast<cplx>().asDiagonal() * ea.eigenvectors().adjoint();
	Matrix pencil = a_inv_sqrt * b * a_inv_sqrt;
	Eigen::SelfAdjointEigenSolver<Matrix> ep((pencil + pencil.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
	double top = ep.eigenvalues().maxCoeff();
	out.delta = top;
	out.mu_star = 1.0 / top;
	return out;
}

FinerVerdict is_finer(const QuantumState& rho1, const QuantumState& rho2, const SearchOptions& options) {
	require_same_dims(rho1.op(), rho2.op());
	const Dims d = rho1.dims();
	FinerVerdict out;
	if (frobenius_distance(rho1.op(), rho2.op()) <= 1e-10) {
		out.finer = true;
		out.p_separable = true;
		return out;
	}

	DeltaResult dr = delta(rho1, rho2, options.tol);
	if (!dr.support_contained) {
		// v in supp(rho2) outside supp(rho1): |v><v| - cI pairs to -c with rho1.
		HermitianOperator outside = HermitianOperator::identity(d) - range_projector(rho1.op(), options.tol);
		Matrix compressed = outside.matrix() * rho2.op().matrix() * outside.matrix();
		Spectrum s = spectrum(HermitianOperator(d, (compressed + compressed.adjoint()) * 0.5));
		Vector v = s.vectors.col(s.values.size() - 1);
		double c = 0.5 * rho2.op().expectation(v);
		out.counterexample = HermitianOperator::projector(d, v) - HermitianOperator::identity(d) * c;
		return out;
	}

	// Candidate mixing weights mu, starting from the P closest to I/D.
	const double x_star = dr.mu_star / (1.0 - dr.mu_star);
	const HermitianOperator centre = HermitianOperator::identity(d) * (1.0 / d.total());
	HermitianOperator a = rho1.op() - centre;
	HermitianOperator diff = rho1.op() - rho2.op();
	std::vector<double> xs;
	double x0 = -a.pairing(diff) / diff.pairing(diff);
	if (x0 > 0.0) xs.push_back(std::min(x0, x_star));
	for (double f : {1.0, 0.5, 0.25, 0.1}) xs.push_back(f * x_star);

	for (double x : xs) {
		if (!(x > 0.0) || !std::isfinite(x)) continue;
		double mu = x / (1.0 + x);
		HermitianOperator p_op = (rho1.op() - rho2.op() * mu) * (1.0 / (1.0 - mu));
		try {
			QuantumState p = QuantumState::normalized(p_op, options.tol);
			if (certified_separable(p, options)) {
				out.finer = true;
				out.epsilon = 1.0 - mu;
				out.p = std::move(p);
				out.p_separable = true;
				return out;
			}
		} catch (const Error&) {
		}
	}
	out.counterexample = distinguish(rho2, rho1, options.tol);
	return out;
}

OptimalityVerdict is_optimal(const QuantumState& rho, const SearchOptions& options) {
	if (certified_separable(rho, options)) {
		throw Error(ErrorCode::precondition, "optimality is defined for entangled states only", "rho");
	}
	const Dims d = rho.dims();
	OptimalityVerdict out;
	HermitianOperator gap = HermitianOperator::identity(d) - range_projector(rho.op(), options.tol);
	BlockPositivityReport report = min_product_expectation(gap, options.seesaw);
	out.range_gap = report.min_value;

	if (report.min_value >= 1e-3) {
		out.optimal = true;
		return out;
	}
	if (report.min_value < 1e-7) {
		// Subtraction: rho' = (1 + eps) rho - eps |v><v| is finer
		// than rho whenever it is still an entangled state.
		const ProductVector& v = report.argmin;
		double w_max = 1.0 / pseudo_inverse(rho.op(), options.tol).expectation(v.vector());
		HermitianOperator pv = v.projector();
		for (int k = 1; k <= 30; k++) {
			double r = w_max / std::pow(2.0, k);
			if (!(r > 0.0) || r >= 1.0) continue;
			double eps = r / (1.0 - r);
			HermitianOperator next = rho.op() * (1.0 + eps) - pv * eps;
			if (!is_psd(next, options.tol)) continue;
			try {
				QuantumState candidate = QuantumState::normalized(next, options.tol);
				if (certified_entangled(candidate, options)) {
					out.optimal = false;
					out.witness_vector = v;
					out.epsilon = eps;
					return out;
				}
			} catch (const Error&) {
			}
		}
	}
	out.optimal = true;
	out.low_confidence = true;
	return out;
}

BSAResult optimize(const QuantumState& rho, int max_steps, const SearchOptions& options) {
	const Dims d = rho.dims();
	const double tol = options.tol;
	BSAResult out;

	HermitianOperator x = ppt_part(rho.op(), tol);
	ProductDecomposition terms;
	if (x.trace() > 1e-8) terms = drain_separable(x, max_steps, options.seesaw, tol).terms;
	HermitianOperator current = rho.op() - terms.reconstruct(d);

	// Remaining product vectors in the range of what is left, PSD-preserving.
	bool exhausted = false;
	for (int step = static_cast<int>(terms.weights.size()); step < max_steps; step++) {
		if (current.trace() <= 1e-10) break;
		SeeSawOptions tail = options.seesaw;
		tail.seed = mix_seed(options.seesaw.seed, 5000 + static_cast<std::uint64_t>(step));
		auto next = range_product_step(current, tail);
		if (!next || next->weight < 1e-9) break;
		double w = std::min(next->weight, current.trace());
		terms.weights.push_back(w);
		terms.vectors.push_back(next->vector);
		current = current - next->vector.projector() * w;
		if (step + 1 == max_steps) exhausted = true;
	}

	// Repair: shrink the separable part until the remainder is PSD.
	auto remainder_min = [&](double s) {
		return min_eigenvalue(rho.op() - terms.reconstruct(d) * (1.0 - s));
	};
	if (!terms.weights.empty() && remainder_min(0.0) < -1e-13) {
		double lo = 0.0;
		double hi = 1.0;
		for (int it = 0; it < 100; it++) {
			double mid = 0.5 * (lo + hi);
			if (remainder_min(mid) >= -1e-13) {
				hi = mid;
			} else {
				lo = mid;
			}
		}
		for (double& w : terms.weights) w *= (1.0 - hi);
		current = rho.op() - terms.reconstruct(d);
	}

	// Drop eigenvalue crumbs left by the drain; otherwise the remainder is
	// numerically full rank and its range trivially contains product vectors.
	if (current.trace() > 1e-8) {
		Spectrum s = spectrum(current);
		Matrix kept = Matrix::Zero(d.total(), d.total());
		for (int i = 0; i < s.values.size(); i++) {
			if (s.values(i) > 1e-6 * s.max()) kept += s.values(i) * s.vectors.col(i) * s.vectors.col(i).adjoint();
		}
		HermitianOperator cleaned(d, (kept + kept.adjoint()) * 0.5);
		if (frobenius_distance(cleaned, current) <= 1e-8) current = cleaned;
	}

	double lambda = terms.total_weight();
	double running = 0.0;
	for (size_t i = 0; i < terms.weights.size(); i++) {
		running += terms.weights[i];
		out.trace.push_back(BsaTraceRow{static_cast<int>(i) + 1, running, 1.0 - running});
	}

	if (current.trace() <= 1e-8 && lambda > 0.0) {
		lambda = 1.0;
	} else if (lambda < 1.0) {
		out.remainder = QuantumState::normalized(current, tol);
		out.remainder_has_product_vectors = exhausted && range_product_step(current, options.seesaw).has_value();
	}
	double total = terms.total_weight();
	if (total > 0.0) {
		for (double& w : terms.weights) w /= total;
	}
	out.lambda_sep = lambda;
	out.sep = terms;

	HermitianOperator rebuilt = HermitianOperator::zero(d);
	if (!terms.weights.empty()) rebuilt = terms.reconstruct(d) * lambda;
	if (out.remainder) rebuilt = rebuilt + out.remainder->op() * (1.0 - lambda);
	out.reconstruction_residual = frobenius_distance(rho.op(), rebuilt);
	return out;
}

bool is_edge(const QuantumState& rho, const SearchOptions& options) {
	if (rho.ppt_flag() != PptFlag::ppt) {
		throw Error(ErrorCode::precondition, "edge test needs a PPT state", "rho");
	}
	if (ppt_is_exact(rho.dims()) || certified_separable(rho, options)) {
		throw Error(ErrorCode::precondition, "edge test needs an entangled state", "rho");
	}
	const Dims d = rho.dims();
	const HermitianOperator id = HermitianOperator::identity(d);
	detail::RangeData r1 = detail::range_data(rho.op(), options.tol);
	detail::RangeData r2 = detail::range_data(partial_transpose(rho.op()), options.tol);
	HermitianOperator gap = (id - r1.projector) + partial_transpose(id - r2.projector);
	return min_product_expectation(gap, options.seesaw).min_value > 1e-7;
}

}  // namespace whk
