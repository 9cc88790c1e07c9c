#include "whk/state_witness.hpp"

#include "detail/lmi.hpp"
#include "detail/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace whk {

// ---------------------------------------------------------------- states

QuantumState::QuantumState(HermitianOperator op, double tol) : op_(std::move(op)) {
	if (std::abs(op_.trace() - 1.0) > 1e-10) {
		throw Error(ErrorCode::invalid_argument, "state trace is " + std::to_string(op_.trace()) + ", expected 1", "trace");
	}
	if (!is_psd(op_, tol)) {
		throw Error(ErrorCode::not_positive, "state is not positive semidefinite", "entries");
	}
	Eigen::VectorXd pt = eigenvalues(partial_transpose(op_));
	pt_min_ = pt(0);
	ppt_ = pt_min_ >= -tol * pt.cwiseAbs().maxCoeff() ? PptFlag::ppt : PptFlag::npt;
}

QuantumState QuantumState::from_operator(HermitianOperator op, double tol) {
	return QuantumState(std::move(op), tol);
}

QuantumState QuantumState::normalized(const HermitianOperator& op, double tol) {
	double t = op.trace();
	if (!(t > 0.0)) {
		throw Error(ErrorCode::invalid_argument, "cannot normalize an operator with non-positive trace", "trace");
	}
	return QuantumState(op * (1.0 / t), tol);
}

QuantumState QuantumState::pure(Dims dims, const Vector& v) {
	return QuantumState(HermitianOperator::projector(dims, v), kDefaultTol);
}

QuantumState QuantumState::maximally_mixed(Dims dims) {
	return QuantumState(HermitianOperator::identity(dims) * (1.0 / dims.total()), kDefaultTol);
}

double QuantumState::purity() const { return op_.pairing(op_); }

// ---------------------------------------------------------------- see-saw

BlockPositivityReport min_product_expectation(const HermitianOperator& op, const SeeSawOptions& options) {
	auto runs = detail::seesaw_all(op, options);
	BlockPositivityReport report;
	report.starts = options.starts;
	int converged = 0;
	double best = std::numeric_limits<double>::infinity();
	for (int s = 0; s < static_cast<int>(runs.size()); s++) {
		if (runs[s].converged) converged++;
		if (runs[s].value < best) {
			best = runs[s].value;
			report.best_start = s;
		}
	}
	report.min_value = best;
	report.argmin = runs[report.best_start].vector;
	report.converged_fraction = static_cast<double>(converged) / options.starts;
	return report;
}

std::vector<double> seesaw_trajectory(const HermitianOperator& op, const ProductVector& start, int sweeps) {
	const Dims d = op.dims();
	Vector e = start.e;
	Vector f = start.f;
	std::vector<double> values{op.expectation(kron(e, f))};
	for (int s = 0; s < sweeps; s++) {
		Matrix mb = Matrix::Zero(d.b, d.b);
		for (int i = 0; i < d.a; i++) {
			for (int k = 0; k < d.a; k++) {
				mb += std::conj(e(i)) * e(k) * op.matrix().block(i * d.b, k * d.b, d.b, d.b);
			}
		}
		Eigen::SelfAdjointEigenSolver<Matrix> sb((mb + mb.adjoint()) * 0.5);
		f = sb.eigenvectors().col(0);
		values.push_back(op.expectation(kron(e, f)));
		Matrix ma(d.a, d.a);
		for (int i = 0; i < d.a; i++) {
			for (int k = 0; k < d.a; k++) ma(i, k) = f.dot(op.matrix().block(i * d.b, k * d.b, d.b, d.b) * f);
		}
		Eigen::SelfAdjointEigenSolver<Matrix> sa((ma + ma.adjoint()) * 0.5);
		e = sa.eigenvectors().col(0);
		values.push_back(op.expectation(kron(e, f)));
	}
	return values;
}

BlockPositivityVerdict is_block_positive(const HermitianOperator& op, const SeeSawOptions& options, double tol) {
	BlockPositivityReport report = min_product_expectation(op, options);
	double tau = tol * std::max(eigenvalues(op).cwiseAbs().maxCoeff(), 1e-300);
	BlockPositivity verdict = BlockPositivity::inconclusive;
	if (report.min_value < -tau) {
		verdict = BlockPositivity::no_certified;
	} else if (report.converged_fraction >= 0.9) {
		verdict = BlockPositivity::yes_evidence;
	}
	return BlockPositivityVerdict{verdict, std::move(report)};
}

// ---------------------------------------------------------------- witnesses

Witness Witness::from_operator(HermitianOperator op, const SeeSawOptions& options, double tol) {
	Eigen::VectorXd ev = eigenvalues(op);
	double tau = tol * ev.cwiseAbs().maxCoeff();
	if (!(ev(0) < -tau)) {
		throw Error(ErrorCode::precondition, "operator is positive semidefinite, not a witness", "op");
	}
	BlockPositivityReport report = whk::min_product_expectation(op, options);
	if (report.min_value < -tau) {
		throw Error(ErrorCode::precondition,
			"operator is not block-positive (product expectation " + std::to_string(report.min_value) + ")", "op");
	}
	return Witness(std::move(op), report.min_value, ev(0), false);
}

Witness Witness::from_partial_transpose(const HermitianOperator& q, double tol) {
	if (!is_psd(q, tol)) {
		throw Error(ErrorCode::precondition, "partial-transpose witness needs a PSD preimage", "q");
	}
	HermitianOperator w = partial_transpose(q);
	Eigen::VectorXd ev = eigenvalues(w);
	if (!(ev(0) < -tol * ev.cwiseAbs().maxCoeff())) {
		throw Error(ErrorCode::precondition, "partial transpose is positive semidefinite, not a witness", "q");
	}
	SeeSawOptions quick;
	quick.starts = 8;
	double min_product = whk::min_product_expectation(w, quick).min_value;
	return Witness(std::move(w), min_product, ev(0), true);
}

Witness Witness::normalized() const {
	double scale = eigenvalues(op_).cwiseAbs().maxCoeff();
	return Witness(op_ * (1.0 / scale), min_product_ / scale, min_eig_ / scale, exact_);
}

Detection detects(const Witness& w, const QuantumState& rho, double tol) {
	require_same_dims(w.op(), rho.op());
	double value = w.op().pairing(rho.op());
	double tau = tol * eigenvalues(w.op()).cwiseAbs().maxCoeff();
	return Detection{value < -tau, value};
}

bool is_ppt(const QuantumState& rho, double tol) {
	Eigen::VectorXd pt = eigenvalues(partial_transpose(rho.op()));
	return pt(0) >= -tol * pt.cwiseAbs().maxCoeff();
}

bool ppt_is_exact(Dims dims) {
	return (dims.a == 2 && dims.b == 2) || (dims.a == 2 && dims.b == 3) || (dims.a == 3 && dims.b == 2);
}

// ---------------------------------------------------------------- decompositions

double ProductDecomposition::total_weight() const {
	double t = 0.0;
	for (double w : weights) t += w;
	return t;
}

HermitianOperator ProductDecomposition::reconstruct(Dims dims) const {
	Matrix m = Matrix::Zero(dims.total(), dims.total());
	for (size_t i = 0; i < weights.size(); i++) {
		Vector v = vectors[i].vector();
		m += weights[i] * (v * v.adjoint());
	}
	return HermitianOperator(dims, (m + m.adjoint()) * 0.5);
}

DrainResult drain_separable(const HermitianOperator& x, int max_steps, const SeeSawOptions& options, double tol) {
	const Dims d = x.dims();
	const HermitianOperator id = HermitianOperator::identity(d);
	DrainResult out{ProductDecomposition{}, x, 0};
	const double t0 = std::max(x.trace(), 1e-300);

	SeeSawOptions candidate = options;
	candidate.max_sweeps = std::max(options.max_sweeps, 2000);
	candidate.convergence = 1e-20;

	for (int step = 0; step < max_steps; step++) {
		if (out.remainder.trace() <= 1e-12 * t0) break;
		detail::RangeData r1 = detail::range_data(out.remainder, tol);
		detail::RangeData r2 = detail::range_data(partial_transpose(out.remainder), tol);
		HermitianOperator gap = (id - r1.projector) + partial_transpose(id - r2.projector);

		candidate.seed = mix_seed(options.seed, static_cast<std::uint64_t>(step) + 1000);
		auto runs = detail::seesaw_all(gap, candidate);
		double best_weight = 0.0;
		const ProductVector* best = nullptr;
		for (const auto& run : runs) {
			if (run.value > 1e-10) continue;
			double w1 = r1.pinv.expectation(run.vector.vector());
			double w2 = r2.pinv.expectation(run.vector.conjugated_vector());
			if (!(w1 > 0.0) || !(w2 > 0.0)) continue;
			double w = std::min(1.0 / w1, 1.0 / w2);
			if (w > best_weight) {
				best_weight = w;
				best = &run.vector;
			}
		}
		if (best == nullptr) break;
		out.terms.weights.push_back(best_weight);
		out.terms.vectors.push_back(*best);
		out.remainder = out.remainder - best->projector() * best_weight;
		out.steps = step + 1;
	}

	// Refit the weights on the chosen projectors; pinv-bound weights carry
	// rounding that otherwise leaves a remainder of order 1e-6.
	if (!out.terms.weights.empty()) {
		std::vector<Matrix> gens;
		for (const auto& v : out.terms.vectors) gens.push_back(v.projector().matrix());
		detail::ConeProjection fit = detail::project_onto_cone(x.matrix(), gens, 10 * static_cast<int>(gens.size()) + 10);
		if (fit.distance < out.remainder.frobenius_norm()) {
			ProductDecomposition refit;
			for (size_t i = 0; i < gens.size(); i++) {
				if (fit.coefficients(static_cast<Eigen::Index>(i)) <= 0.0) continue;
				refit.weights.push_back(fit.coefficients(static_cast<Eigen::Index>(i)));
				refit.vectors.push_back(out.terms.vectors[i]);
			}
			out.terms = std::move(refit);
			out.remainder = x - out.terms.reconstruct(d);
		}
	}

	// Alternating least squares on the terms: each vector moves to the best
	// product fit of the residual with the other terms held fixed.
	if (!out.terms.weights.empty() && out.remainder.frobenius_norm() > 1e-13 * t0) {
		ProductDecomposition polished = out.terms;
		Matrix resid = out.remainder.matrix();
		double best = out.remainder.frobenius_norm();
		for (int round = 0; round < 200; round++) {
			for (size_t i = 0; i < polished.weights.size(); i++) {
				Matrix r = resid + polished.weights[i] * polished.vectors[i].projector().matrix();
				ProductVector v = detail::seesaw_from(-r, d, polished.vectors[i], 2);
				double w = std::max(0.0, v.vector().dot(r * v.vector()).real());
				polished.vectors[i] = v;
				polished.weights[i] = w;
				resid = r - w * v.projector().matrix();
			}
			double norm = resid.norm();
			if (norm > best * (1.0 - 1e-3)) {
				if (norm < best) best = norm;
				break;
			}
			best = norm;
		}
		HermitianOperator rem = x - polished.reconstruct(d);
		if (rem.frobenius_norm() < out.remainder.frobenius_norm()) {
			out.terms = std::move(polished);
			out.remainder = rem;
		}
	}
	return out;
}

// ---------------------------------------------------------------- separability

namespace {

std::optional<Witness> edge_witness(const QuantumState& rho, const SearchOptions& options) {
	const Dims d = rho.dims();
	const HermitianOperator id = HermitianOperator::identity(d);
	detail::RangeData r1 = detail::range_data(rho.op(), options.tol);
	detail::RangeData r2 = detail::range_data(partial_transpose(rho.op()), options.tol);
	HermitianOperator gap = (id - r1.projector) + partial_transpose(id - r2.projector);
	BlockPositivityReport report = min_product_expectation(gap, options.seesaw);
	if (report.min_value <= 1e-7) return std::nullopt;
	// The see-saw value bounds the true minimum from above; keep a margin.
	HermitianOperator w = gap - id * (0.99 * report.min_value);
	SeeSawOptions check = options.seesaw;
	check.seed = mix_seed(options.seesaw.seed, 17);
	try {
		Witness witness = Witness::from_operator(w, check, options.tol).normalized();
		if (detects(witness, rho, options.tol).detected) return witness;
	} catch (const Error&) {
	}
	return std::nullopt;
}

std::optional<Witness> cutting_plane_witness(const QuantumState& rho, const SearchOptions& options) {
	const Dims d = rho.dims();
	const int n = d.total();
	Rng rng(mix_seed(options.seesaw.seed, 29));
	std::vector<Matrix> samples;
	for (int i = 0; i < d.a; i++) {
		for (int j = 0; j < d.b; j++) samples.push_back(ProductVector::basis(d, i, j).projector().matrix());
	}
	for (int k = 0; k < 2 * n * n; k++) samples.push_back(rng.product_vector(d).projector().matrix());

	for (int round = 0; round < options.effort; round++) {
		detail::ConeProjection proj = detail::project_onto_cone(rho.op().matrix(), samples, 10 * static_cast<int>(samples.size()));
		if (proj.distance < 1e-9) return std::nullopt;
		Matrix h = (proj.nearest - rho.op().matrix()) / proj.distance;
		HermitianOperator candidate(d, (h + h.adjoint()) * 0.5);
		SeeSawOptions probe = options.seesaw;
		probe.seed = mix_seed(options.seesaw.seed, 100 + static_cast<std::uint64_t>(round));
		BlockPositivityReport report = min_product_expectation(candidate, probe);
		double tau = options.tol * eigenvalues(candidate).cwiseAbs().maxCoeff();
		if (report.min_value >= -tau) {
			try {
				Witness w = Witness::from_operator(candidate, probe, options.tol).normalized();
				if (detects(w, rho, options.tol).detected) return w;
			} catch (const Error&) {
			}
			return std::nullopt;
		}
		samples.push_back(report.argmin.projector().matrix());
	}
	return std::nullopt;
}

}  // namespace

std::optional<Witness> ppt_witness_search(const QuantumState& rho, const SearchOptions& options) {
	if (auto w = edge_witness(rho, options)) return w;
	return cutting_plane_witness(rho, options);
}

SeparabilityVerdict is_separable(const QuantumState& rho, const SearchOptions& options) {
	SeparabilityVerdict out;
	out.exact = ppt_is_exact(rho.dims());
	if (!is_ppt(rho, options.tol)) {
		out.verdict = Separability::entangled;
		out.witness = detail::npt_witness(rho).normalized();
		return out;
	}

	DrainResult drained = drain_separable(rho.op(), options.effort, options.seesaw, options.tol);
	double residual = frobenius_distance(rho.op(), drained.terms.reconstruct(rho.dims()));
	bool certified = !drained.terms.weights.empty() && residual <= 1e-7;
	if (certified) {
		out.certificate = drained.terms;
		out.residual = residual;
	}
	if (out.exact || certified) {
		out.verdict = Separability::separable;
		return out;
	}
	if (auto w = ppt_witness_search(rho, options)) {
		out.verdict = Separability::entangled;
		out.witness = std::move(w);
		return out;
	}
	out.verdict = Separability::unknown;
	return out;
}

// ---------------------------------------------------------------- decomposability

DecompositionCertificate decompose_witness(const Witness& w, int iters, double tol) {
	const Dims d = w.dims();
	const int n = d.total();
	const Matrix id = Matrix::Identity(n, n);
	auto basis = detail::hermitian_basis(n);
	const int nq = static_cast<int>(basis.size());

	// Variables (Q coefficients, s); maximize s subject to Q - sI > 0 and W - Q^Gamma - sI > 0.
	detail::AffineLmi q_pos{Matrix::Zero(n, n), {}};
	detail::AffineLmi p_pos{w.op().matrix(), {}};
	for (const auto& e : basis) {
		q_pos.coeffs.push_back(e);
		p_pos.coeffs.push_back(-partial_transpose(HermitianOperator(d, e)).matrix());
	}
	q_pos.coeffs.push_back(-id);
	p_pos.coeffs.push_back(-id);

	Eigen::VectorXd c = Eigen::VectorXd::Zero(nq + 1);
	c(nq) = 1.0;
	Eigen::VectorXd start = Eigen::VectorXd::Zero(nq + 1);
	start(nq) = std::min(0.0, w.min_eigenvalue()) - 1.0;

	detail::LmiOptions lmi;
	lmi.max_newton = iters;
	lmi.gap = 1e-12;
	detail::LmiResult res = detail::maximize(c, {q_pos, p_pos}, start, lmi);

	Matrix qm = Matrix::Zero(n, n);
	for (int k = 0; k < nq; k++) qm += res.y(k) * basis[k];
	HermitianOperator q = psd_part(HermitianOperator(d, (qm + qm.adjoint()) * 0.5));
	HermitianOperator p = psd_part(w.op() - partial_transpose(q));
	double residual = frobenius_distance(w.op(), p + partial_transpose(q));
	double scale = eigenvalues(w.op()).cwiseAbs().maxCoeff();

	DecompositionCertificate cert{DecompositionVerdict::inconclusive, 0.0, p, q, residual, res.y(nq), std::nullopt};
	if (res.y(nq) >= -tol * scale && residual <= 1e-7) {
		double tp = p.trace();
		double tq = q.trace();
		cert.verdict = DecompositionVerdict::decomposable;
		cert.a = tp / (tp + tq);
		cert.p = cert.a > 0.0 ? p * (1.0 / cert.a) : p;
		cert.q = cert.a < 1.0 ? q * (1.0 / (1.0 - cert.a)) : q;
		return cert;
	}
	if (auto rho = indecomposability_certificate(w, 0, tol)) {
		cert.verdict = DecompositionVerdict::indecomposable_evidence;
		cert.counterexample = std::move(rho);
	}
	return cert;
}

std::optional<QuantumState> indecomposability_certificate(const Witness& w, std::uint64_t seed, double tol) {
	const Dims d = w.dims();
	const int n = d.total();
	auto basis = detail::traceless_hermitian_basis(n);

	// Interior start: an even mixture of I/D and a random product state.
	Rng rng(seed);
	Matrix start_state = Matrix::Identity(n, n) * (0.5 / n) + 0.5 * rng.product_vector(d).projector().matrix();

	detail::AffineLmi pos{start_state, basis};
	detail::AffineLmi ppt{partial_transpose(HermitianOperator(d, start_state)).matrix(), {}};
	Eigen::VectorXd c(static_cast<Eigen::Index>(basis.size()));
	for (size_t k = 0; k < basis.size(); k++) {
		HermitianOperator e(d, basis[k]);
		ppt.coeffs.push_back(partial_transpose(e).matrix());
		c(k) = -w.op().pairing(e);
	}
	detail::LmiOptions lmi;
	lmi.gap = 1e-10;
	detail::LmiResult res = detail::maximize(c, {pos, ppt}, Eigen::VectorXd::Zero(c.size()), lmi);

	Matrix rm = pos.evaluate(res.y);
	rm = (rm + rm.adjoint()) * 0.5;
	rm /= rm.trace().real();
	HermitianOperator rho_op(d, rm);
	double value = w.op().pairing(rho_op);
	double tau = tol * eigenvalues(w.op()).cwiseAbs().maxCoeff();
	if (!(value < -tau)) return std::nullopt;
	try {
		QuantumState rho = QuantumState::from_operator(rho_op, tol);
		if (rho.ppt_flag() != PptFlag::ppt) return std::nullopt;
		return rho;
	} catch (const Error&) {
		return std::nullopt;
	}
}

}  // namespace whk
