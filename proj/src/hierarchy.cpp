#include "whk/hierarchy.hpp"

#include "detail/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace whk {

const char* to_string(Stratum s) {
	switch (s) {
		case Stratum::separable_state: return "separable_state";
		case Stratum::entangled_state: return "entangled_state";
		case Stratum::entanglement_witness: return "entanglement_witness";
		case Stratum::other_observable: return "other_observable";
		case Stratum::unknown: return "unknown";
	}
	return "unknown";
}

const char* to_string(SubLabel s) {
	switch (s) {
		case SubLabel::npt: return "npt";
		case SubLabel::ppt_bound: return "ppt_bound";
		case SubLabel::decomposable: return "decomposable";
		case SubLabel::indecomposable_evidence: return "indecomposable_evidence";
	}
	return "unknown";
}

namespace {

double abs_scale(const HermitianOperator& op) {
	double s = eigenvalues(op).cwiseAbs().maxCoeff();
	return s > 0.0 ? s : 1.0;
}

struct CommonSearch {
	double best_lambda = 0.0;
	double best_value = 0.0;
	std::optional<HermitianOperator> state;
};

double combo_min(const HermitianOperator& a, const HermitianOperator& b, double lambda) {
	return min_eigenvalue(a * lambda + b * (1.0 - lambda));
}

// Maximizes the concave g(lambda) = lambda_min(lambda a + (1 - lambda) b) by
// golden-section search. If the maximum is negative, a state with negative
// pairing against both a and b exists (minimax), and is built from the
// near-ground eigenspace at the maximizer.
CommonSearch common_negative(const HermitianOperator& a, const HermitianOperator& b, double tau) {
	const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
	double lo = 0.0;
	double hi = 1.0;
	double x1 = hi - inv_phi * (hi - lo);
	double x2 = lo + inv_phi * (hi - lo);
	double g1 = combo_min(a, b, x1);
	double g2 = combo_min(a, b, x2);
	while (hi - lo > 1e-12) {
		if (g1 < g2) {
			lo = x1;
			x1 = x2;
			g1 = g2;
			x2 = lo + inv_phi * (hi - lo);
			g2 = combo_min(a, b, x2);
		} else {
			hi = x2;
			x2 = x1;
			g2 = g1;
			x1 = hi - inv_phi * (hi - lo);
			g1 = combo_min(a, b, x1);
		}
	}
	CommonSearch out;
	out.best_lambda = 0.5 * (lo + hi);
	out.best_value = combo_min(a, b, out.best_lambda);
	for (double end : {0.0, 1.0}) {
		double g = combo_min(a, b, end);
		if (g > out.best_value) {
			out.best_value = g;
			out.best_lambda = end;
		}
	}
	if (out.best_value >= -tau) return out;

	const Dims d = a.dims();
	const HermitianOperator diff = a - b;
	auto accept = [&](const HermitianOperator& rho) {
		return a.pairing(rho) < -tau && b.pairing(rho) < -tau;
	};
	auto try_pair = [&](const Vector& u, const Vector& v) -> std::optional<HermitianOperator> {
		HermitianOperator pu = HermitianOperator::projector(d, u);
		HermitianOperator pv = HermitianOperator::projector(d, v);
		if (accept(pu)) return pu;
		if (accept(pv)) return pv;
		double du = diff.pairing(pu);
		double dv = diff.pairing(pv);
		if (du * dv < 0.0) {
			// Mixture with tr(a rho) = tr(b rho).
			double t = dv / (dv - du);
			HermitianOperator mix = pu * t + pv * (1.0 - t);
			if (accept(mix)) return mix;
		}
		return std::nullopt;
	};

	Spectrum s = spectrum(a * out.best_lambda + b * (1.0 - out.best_lambda));
	if (auto r = try_pair(s.ground(), s.ground())) {
		out.state = r;
		return out;
	}
	const double scale = std::max(abs_scale(a), abs_scale(b));
	for (double width : {1e-10, 1e-8, 1e-6, 1e-4, 1e-2}) {
		int k = 0;
		while (k < s.values.size() && s.values(k) <= s.values(0) + width * scale) k++;
		Matrix u = s.vectors.leftCols(k);
		Matrix reduced = u.adjoint() * diff.matrix() * u;
		Eigen::SelfAdjointEigenSolver<Matrix> es((reduced + reduced.adjoint()) * 0.5);
		Vector lo_vec = u * es.eigenvectors().col(0);
		Vector hi_vec = u * es.eigenvectors().col(k - 1);
		if (auto r = try_pair(lo_vec, hi_vec)) {
			out.state = r;
			return out;
		}
	}
	for (double delta : {1e-9, 1e-7, 1e-5, 1e-3}) {
		double l1 = std::max(0.0, out.best_lambda - delta);
		double l2 = std::min(1.0, out.best_lambda + delta);
		Vector v1 = spectrum(a * l1 + b * (1.0 - l1)).ground();
		Vector v2 = spectrum(a * l2 + b * (1.0 - l2)).ground();
		if (auto r = try_pair(v1, v2)) {
			out.state = r;
			return out;
		}
	}
	return out;
}

}  // namespace

ClassLabel classify(const HermitianOperator& op, const SearchOptions& options) {
	if (op.max_abs_entry() == 0.0) {
		throw Error(ErrorCode::invalid_argument, "cannot classify the zero operator", "entries");
	}
	ClassLabel label;
	const double tol = options.tol;
	if (is_psd(op, tol)) {
		QuantumState rho = QuantumState::normalized(op, tol);
		SeparabilityVerdict sep = is_separable(rho, options);
		label.exact = sep.exact || sep.certificate.has_value() || rho.ppt_flag() == PptFlag::npt;
		switch (sep.verdict) {
			case Separability::separable:
				label.stratum = Stratum::separable_state;
				break;
			case Separability::entangled:
				label.stratum = Stratum::entangled_state;
				label.sub = rho.ppt_flag() == PptFlag::npt ? SubLabel::npt : SubLabel::ppt_bound;
				break;
			case Separability::unknown:
				label.stratum = Stratum::unknown;
				label.exact = false;
				break;
		}
		return label;
	}

	BlockPositivityVerdict bp = is_block_positive(op, options.seesaw, tol);
	if (bp.verdict == BlockPositivity::no_certified) {
		label.stratum = Stratum::other_observable;
		label.exact = true;
		return label;
	}
	if (bp.verdict == BlockPositivity::inconclusive) {
		label.stratum = Stratum::unknown;
		return label;
	}
	label.stratum = Stratum::entanglement_witness;
	Witness w = Witness::from_operator(op, options.seesaw, tol);
	DecompositionCertificate cert = decompose_witness(w, 200, tol);
	if (cert.verdict == DecompositionVerdict::decomposable) {
		label.sub = SubLabel::decomposable;
	} else if (cert.verdict == DecompositionVerdict::indecomposable_evidence) {
		label.sub = SubLabel::indecomposable_evidence;
	}
	return label;
}

Witness witness_for(const QuantumState& rho, const SearchOptions& options) {
	if (rho.ppt_flag() == PptFlag::npt) {
		return detail::npt_witness(rho).normalized();
	}
	if (ppt_is_exact(rho.dims())) {
		throw Error(ErrorCode::no_witness_exists, "state is PPT at dimensions where PPT implies separable", "rho");
	}
	SeparabilityVerdict sep = is_separable(rho, options);
	if (sep.verdict == Separability::separable) {
		throw Error(ErrorCode::no_witness_exists, "state has a certified separable decomposition", "rho");
	}
	if (sep.witness) return *sep.witness;
	throw Error(ErrorCode::inconclusive, "witness search for PPT state exhausted its budget", "effort");
}

QuantumState super_witness_for(const Witness& w, double tol) {
	Spectrum s = spectrum(w.op());
	Vector v = s.ground();
	Eigen::VectorXd schmidt = schmidt_coefficients(w.dims(), v);
	if (schmidt.size() < 2 || schmidt(1) <= 1e-8) {
		throw Error(ErrorCode::stratum_violation,
			"most negative eigenvector is a product vector, so the operator is not block-positive", "w");
	}
	QuantumState pi = QuantumState::pure(w.dims(), v);
	if (!(w.op().pairing(pi.op()) < -tol * s.max_abs())) {
		throw Error(ErrorCode::inconsistency, "super witness does not pair negatively with the witness", "w");
	}
	return pi;
}

QuantumState super_super_witness_for(const HermitianOperator& o, const SeeSawOptions& options, double tol) {
	BlockPositivityReport report = min_product_expectation(o, options);
	double tau = tol * abs_scale(o);
	if (report.min_value >= -tau) {
		throw Error(ErrorCode::not_in_observables,
			"operator shows block-positivity evidence; no product state pairs negatively with it", "o");
	}
	return QuantumState::from_operator(report.argmin.projector(), tol);
}

CommonStateResult common_detected_state(const Witness& w1, const Witness& w2, double tol) {
	require_same_dims(w1.op(), w2.op());
	double tau = tol * std::max(abs_scale(w1.op()), abs_scale(w2.op()));
	CommonSearch search = common_negative(w1.op(), w2.op(), tau);
	CommonStateResult out;
	out.best_lambda = search.best_lambda;
	out.best_value = search.best_value;
	if (search.best_value >= -tau) {
		out.blocking_lambda = search.best_lambda;
		return out;
	}
	if (!search.state) {
		throw Error(ErrorCode::inconsistency,
			"combinations are never PSD but no commonly detected state was constructed", "tol");
	}
	QuantumState rho = QuantumState::normalized(*search.state, tol);
	if (!detects(w1, rho, tol).detected || !detects(w2, rho, tol).detected) {
		throw Error(ErrorCode::inconsistency, "constructed state is not detected by both witnesses", "tol");
	}
	out.state = std::move(rho);
	return out;
}

CommonWitnessResult common_witness(const QuantumState& p1, const QuantumState& p2, double tol) {
	require_same_dims(p1.op(), p2.op());
	HermitianOperator a = partial_transpose(p1.op());
	HermitianOperator b = partial_transpose(p2.op());
	double tau = tol * std::max(abs_scale(a), abs_scale(b));
	// tr(Q^Gamma p) = tr(Q p^Gamma): a PSD Q negative on both partial
	// transposes yields the exact witness Q^Gamma.
	CommonSearch search = common_negative(a, b, tau);
	CommonWitnessResult out;
	out.best_lambda = search.best_lambda;
	out.best_value = search.best_value;
	out.exact = ppt_is_exact(p1.dims());
	if (search.best_value >= -tau) {
		out.blocking_lambda = search.best_lambda;
		return out;
	}
	if (!search.state) {
		throw Error(ErrorCode::inconsistency,
			"every combination is NPT but no common witness was constructed", "tol");
	}
	Witness w = Witness::from_partial_transpose(*search.state * (1.0 / search.state->trace()), tol).normalized();
	if (!detects(w, p1, tol).detected || !detects(w, p2, tol).detected) {
		throw Error(ErrorCode::inconsistency, "constructed witness does not detect both states", "tol");
	}
	out.witness = std::move(w);
	return out;
}

HermitianOperator distinguish(const QuantumState& r1, const QuantumState& r2, double tol) {
	require_same_dims(r1.op(), r2.op());
	HermitianOperator a = r1.op() - r2.op();
	if (a.frobenius_norm() <= 1e-8) {
		throw Error(ErrorCode::indistinguishable, "states are equal within tolerance", "r2");
	}
	double c = 0.5 * (a.pairing(r1.op()) + a.pairing(r2.op()));
	HermitianOperator m = a - HermitianOperator::identity(a.dims()) * c;
	if (!(m.pairing(r2.op()) < 0.0 && m.pairing(r1.op()) > 0.0) || is_psd(m, tol)) {
		throw Error(ErrorCode::inconsistency, "separator violates its sign contract", "tol");
	}
	return m;
}

SeparatorResult separate(const HermitianOperator& target, const std::vector<HermitianOperator>& cone_samples,
	int iters, double tol) {
	if (cone_samples.empty()) {
		throw Error(ErrorCode::invalid_argument, "need at least one cone sample", "cone_samples");
	}
	std::vector<Matrix> gens;
	gens.reserve(cone_samples.size());
	for (const auto& s : cone_samples) {
		require_same_dims(target, s);
		gens.push_back(s.matrix());
	}
	detail::ConeProjection proj = detail::project_onto_cone(target.matrix(), gens, iters);
	double scale = std::max(1.0, target.frobenius_norm());
	if (proj.distance <= 1e-9 * scale) {
		throw Error(ErrorCode::no_separator_found, "target lies in the sampled cone", "target");
	}
	Matrix h = (proj.nearest - target.matrix()) / proj.distance;
	HermitianOperator sep(target.dims(), (h + h.adjoint()) * 0.5);
	double floor = std::numeric_limits<double>::infinity();
	for (const auto& s : cone_samples) floor = std::min(floor, sep.pairing(s));
	SeparatorResult out{sep, sep.pairing(target), floor};
	if (!(out.target_value < std::min(out.set_floor, 0.0) - tol)) {
		throw Error(ErrorCode::no_separator_found, "no strict separation within the iteration budget", "iters");
	}
	return out;
}

std::vector<double> lambda_grid(const HermitianOperator& a, const HermitianOperator& b, int points) {
	std::vector<double> out;
	out.reserve(points);
	for (int i = 0; i < points; i++) {
		double lambda = points > 1 ? static_cast<double>(i) / (points - 1) : 0.0;
		out.push_back(combo_min(a, b, lambda));
	}
	return out;
}

}  // namespace whk
