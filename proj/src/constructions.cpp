#include "whk/constructions.hpp"

#include "detail/search.hpp"
#include "whk/order.hpp"

#include <cmath>
#include <string>

namespace whk {

Vector bell_phi_plus() {
	Vector v = Vector::Zero(4);
	v(0) = v(3) = 1.0 / std::sqrt(2.0);
	return v;
}

Vector singlet() {
	Vector v = Vector::Zero(4);
	v(2) = 1.0 / std::sqrt(2.0);
	v(1) = -1.0 / std::sqrt(2.0);
	return v;
}

QuantumState werner(double p) {
	if (!(p >= 0.0 && p <= 1.0)) {
		throw Error(ErrorCode::invalid_argument, "Werner parameter must lie in [0, 1]", "p");
	}
	Dims d{2, 2};
	HermitianOperator op = HermitianOperator::projector(d, bell_phi_plus()) * p + HermitianOperator::identity(d) * ((1.0 - p) / 4.0);
	return QuantumState::from_operator(op);
}

WitnessFamilyMember werner_witness_family(double q, const QuantumState& sigma, const QuantumState& target, double tol) {
	if (!(q >= 0.0 && q <= 1.0)) {
		throw Error(ErrorCode::invalid_argument, "mixing weight must lie in [0, 1]", "q");
	}
	if (!(sigma.dims() == Dims{2, 2})) {
		throw Error(ErrorCode::dims_mismatch, "witness family lives on 2x2", "rho");
	}
	require_same_dims(sigma.op(), target.op());
	HermitianOperator w = partial_transpose(HermitianOperator::projector(Dims{2, 2}, singlet())) * q + sigma.op() * (1.0 - q);
	return WitnessFamilyMember{w, in_witnessed_set(w, target, tol), w.pairing(target.op())};
}

UPBSpec make_upb(Dims dims, std::vector<ProductVector> vectors, const SeeSawOptions& options) {
	dims.validate();
	if (vectors.empty()) {
		throw Error(ErrorCode::invalid_argument, "UPB needs at least one vector", "vectors");
	}
	const int n = static_cast<int>(vectors.size());
	Matrix basis(dims.total(), n);
	for (int i = 0; i < n; i++) {
		if (!(vectors[i].dims() == dims)) {
			throw Error(ErrorCode::dims_mismatch, "vector " + std::to_string(i) + " has wrong factor sizes", "vectors");
		}
		basis.col(i) = vectors[i].vector();
	}
	Matrix gram = basis.adjoint() * basis;
	double off = (gram - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
	if (off > 1e-10) {
		throw Error(ErrorCode::invalid_argument, "UPB vectors are not orthonormal", "vectors");
	}
	HermitianOperator sum(dims, basis * basis.adjoint());
	double gap = min_product_expectation(sum, options).min_value;
	if (gap < 1e-3) {
		throw Error(ErrorCode::invalid_argument, "a product vector orthogonal to every UPB vector was found", "vectors");
	}
	return UPBSpec{dims, std::move(vectors), dims.total(), n, gap};
}

UPBSpec tiles_upb(const SeeSawOptions& options) {
	auto k = [](int i) {
		Vector v = Vector::Zero(3);
		v(i) = 1.0;
		return v;
	};
	Vector all = Vector::Ones(3);
	std::vector<ProductVector> vs{
		ProductVector::make(k(0), k(0) - k(1)),
		ProductVector::make(k(2), k(1) - k(2)),
		ProductVector::make(k(0) - k(1), k(2)),
		ProductVector::make(k(1) - k(2), k(0)),
		ProductVector::make(all, all),
	};
	return make_upb(Dims{3, 3}, std::move(vs), options);
}

QuantumState upb_complement_state(const UPBSpec& upb) {
	if (upb.n >= upb.D) {
		throw Error(ErrorCode::invalid_argument, "UPB leaves no complement", "vectors");
	}
	HermitianOperator op = HermitianOperator::identity(upb.dims);
	for (const auto& v : upb.vectors) op = op - v.projector();
	return QuantumState::from_operator(op * (1.0 / (upb.D - upb.n)));
}

long long ces_max_dim(const std::vector<int>& dims) {
	if (dims.size() < 2) {
		throw Error(ErrorCode::invalid_argument, "need at least two parties", "dims");
	}
	long long prod = 1;
	long long sum = 0;
	for (int d : dims) {
		if (d < 2) throw Error(ErrorCode::invalid_argument, "every local dimension must be at least 2", "dims");
		prod *= d;
		sum += d;
	}
	return prod - sum + static_cast<long long>(dims.size()) - 1;
}

QuantumState ces_mixture_optimal_sample(const UPBSpec& upb, std::uint64_t seed) {
	HermitianOperator complement = upb_complement_state(upb).op();
	Matrix c = range_basis(complement);
	Rng rng(seed);
	Matrix g = rng.ginibre(static_cast<int>(c.cols()), static_cast<int>(c.cols()));
	Matrix m = c * g * g.adjoint() * c.adjoint();
	m /= m.trace().real();
	return QuantumState::from_operator(HermitianOperator(upb.dims, (m + m.adjoint()) * 0.5));
}

const char* to_string(MeasureMode m) {
	return m == MeasureMode::decomposable_exact ? "decomposable_exact" : "indecomposable_search";
}

MeasureResult measure(const QuantumState& rho, const SearchOptions& options) {
	MeasureResult out;
	if (rho.ppt_flag() == PptFlag::npt) {
		Witness w = detail::npt_witness(rho);
		out.value = std::max(0.0, -w.op().pairing(rho.op()));
		out.achieving_witness = std::move(w);
		return out;
	}
	if (ppt_is_exact(rho.dims())) return out;
	SeparabilityVerdict sep = is_separable(rho, options);
	if (sep.verdict != Separability::entangled || !sep.witness) return out;
	out.mode = MeasureMode::indecomposable_search;
	const HermitianOperator& w = sep.witness->op();
	double t = w.trace();
	if (!(t > 0.0)) return out;
	Witness scaled = Witness::from_operator(w * (1.0 / t), options.seesaw, options.tol);
	double value = -scaled.op().pairing(rho.op());
	if (value > 0.0) {
		out.value = value;
		out.achieving_witness = std::move(scaled);
	}
	return out;
}

}  // namespace whk
