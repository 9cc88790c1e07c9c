#include "whk/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace whk::io {

namespace {

[[noreturn]] void schema_error(const std::string& field, const std::string& message) {
	throw Error(ErrorCode::schema, message, field);
}

const json& require(const json& j, const char* key) {
	if (!j.is_object() || !j.contains(key)) schema_error(key, std::string("missing field '") + key + "'");
	return j.at(key);
}

Dims dims_from_json(const json& j) {
	if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
		schema_error("dims", "dims must be a two-element integer array");
	}
	Dims d{j[0].get<int>(), j[1].get<int>()};
	if (d.a < 2 || d.b < 2) schema_error("dims", "subsystem dimensions must be at least 2");
	return d;
}

json real_matrix(const Matrix& m, bool imag) {
	json rows = json::array();
	for (Eigen::Index i = 0; i < m.rows(); i++) {
		json row = json::array();
		for (Eigen::Index k = 0; k < m.cols(); k++) row.push_back(imag ? m(i, k).imag() : m(i, k).real());
		rows.push_back(std::move(row));
	}
	return rows;
}

void fill_part(const json& rows, const char* field, int n, Matrix& m, bool imag) {
	if (!rows.is_array() || static_cast<int>(rows.size()) != n) {
		schema_error(field, std::string(field) + " must have " + std::to_string(n) + " rows");
	}
	for (int i = 0; i < n; i++) {
		const json& row = rows[i];
		if (!row.is_array() || static_cast<int>(row.size()) != n) {
			schema_error(std::string(field) + "[" + std::to_string(i) + "]", "row must have " + std::to_string(n) + " entries");
		}
		for (int k = 0; k < n; k++) {
			if (!row[k].is_number()) {
				schema_error(std::string(field) + "[" + std::to_string(i) + "][" + std::to_string(k) + "]", "entry is not a number");
			}
			double v = row[k].get<double>();
			if (imag) {
				m(i, k) = cplx(m(i, k).real(), v);
			} else {
				m(i, k) = cplx(v, m(i, k).imag());
			}
		}
	}
}

json maybe_state(const std::optional<QuantumState>& s) {
	return s ? to_json(s->op()) : json(nullptr);
}

json finite_or_null(double v) {
	return std::isfinite(v) ? json(v) : json(nullptr);
}

}  // namespace

json to_json(const HermitianOperator& op) {
	return json{{"dims", {op.dims().a, op.dims().b}}, {"re", real_matrix(op.matrix(), false)},
		{"im", real_matrix(op.matrix(), true)}};
}

HermitianOperator operator_from_json(const json& j) {
	Dims d = dims_from_json(require(j, "dims"));
	const int n = d.total();
	Matrix m = Matrix::Zero(n, n);
	fill_part(require(j, "re"), "re", n, m, false);
	fill_part(require(j, "im"), "im", n, m, true);
	try {
		return HermitianOperator(d, std::move(m));
	} catch (const Error& e) {
		if (e.code() == ErrorCode::malformed_operator) throw Error(ErrorCode::malformed_operator, e.what(), "im");
		throw;
	}
}

json to_json(const Vector& v) {
	json out = json::array();
	for (Eigen::Index i = 0; i < v.size(); i++) out.push_back({v(i).real(), v(i).imag()});
	return out;
}

Vector vector_from_json(const json& j, const std::string& field) {
	if (!j.is_array() || j.empty()) schema_error(field, "vector must be a nonempty array of [re, im] pairs");
	Vector v(static_cast<Eigen::Index>(j.size()));
	for (size_t i = 0; i < j.size(); i++) {
		const json& z = j[i];
		if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
			schema_error(field + "[" + std::to_string(i) + "]", "complex entries are [re, im] pairs");
		}
		v(static_cast<Eigen::Index>(i)) = cplx(z[0].get<double>(), z[1].get<double>());
	}
	return v;
}

json to_json(const ProductVector& v) {
	return json{{"e", to_json(v.e)}, {"f", to_json(v.f)}};
}

json to_json(const ProductDecomposition& d) {
	json terms = json::array();
	for (size_t i = 0; i < d.weights.size(); i++) {
		json t = to_json(d.vectors[i]);
		t["weight"] = d.weights[i];
		terms.push_back(std::move(t));
	}
	return terms;
}

json to_json(const UPBSpec& upb) {
	json vs = json::array();
	for (const auto& v : upb.vectors) vs.push_back(to_json(v));
	return json{{"dims", {upb.dims.a, upb.dims.b}}, {"vectors", vs}, {"D", upb.D}, {"n", upb.n},
		{"unextendibility_gap", upb.unextendibility_gap}};
}

UPBSpec upb_from_json(const json& j, const SeeSawOptions& options) {
	Dims d = dims_from_json(require(j, "dims"));
	const json& vs = require(j, "vectors");
	if (!vs.is_array() || vs.empty()) schema_error("vectors", "vectors must be a nonempty array");
	std::vector<ProductVector> out;
	for (size_t i = 0; i < vs.size(); i++) {
		std::string base = "vectors[" + std::to_string(i) + "]";
		if (!vs[i].is_object() || !vs[i].contains("e") || !vs[i].contains("f")) {
			schema_error(base, "each vector needs 'e' and 'f'");
		}
		Vector e = vector_from_json(vs[i]["e"], base + ".e");
		Vector f = vector_from_json(vs[i]["f"], base + ".f");
		if (e.size() != d.a) schema_error(base + ".e", "length must equal dims[0]");
		if (f.size() != d.b) schema_error(base + ".f", "length must equal dims[1]");
		out.push_back(ProductVector::make(e, f));
	}
	return make_upb(d, std::move(out), options);
}

json to_json(const BlockPositivityReport& r) {
	return json{{"min_value", r.min_value}, {"argmin", to_json(r.argmin)}, {"starts", r.starts},
		{"converged_fraction", r.converged_fraction}};
}

json to_json(const DecompositionCertificate& c) {
	const char* verdict = c.verdict == DecompositionVerdict::decomposable ? "decomposable"
		: c.verdict == DecompositionVerdict::indecomposable_evidence ? "indecomposable_evidence" : "inconclusive";
	return json{{"verdict", verdict}, {"a", c.a}, {"P", to_json(c.p)}, {"Q", to_json(c.q)},
		{"residual", c.residual}, {"margin", c.margin}, {"counterexample_state", maybe_state(c.counterexample)}};
}

json to_json(const ClassLabel& label) {
	return json{{"stratum", to_string(label.stratum)}, {"sub", label.sub ? json(to_string(*label.sub)) : json(nullptr)},
		{"exact", label.exact}};
}

json to_json(const SeparatorResult& s) {
	return json{{"separator", to_json(s.separator)}, {"target_value", s.target_value}, {"set_floor", s.set_floor}};
}

json to_json(const DeltaResult& d) {
	return json{{"delta", finite_or_null(d.delta)}, {"finite", std::isfinite(d.delta)}, {"mu_star", d.mu_star},
		{"support_contained", d.support_contained}};
}

json to_json(const FinerVerdict& f) {
	return json{{"finer", f.finer}, {"epsilon", f.epsilon}, {"P", maybe_state(f.p)}, {"p_separable", f.p_separable},
		{"counterexample", f.counterexample ? to_json(*f.counterexample) : json(nullptr)}};
}

json to_json(const OptimalityVerdict& o) {
	return json{{"optimal", o.optimal}, {"range_gap", o.range_gap}, {"low_confidence", o.low_confidence},
		{"witness_vector", o.witness_vector ? to_json(*o.witness_vector) : json(nullptr)}, {"epsilon", o.epsilon}};
}

json to_json(const BSAResult& b) {
	json trace = json::array();
	for (const auto& row : b.trace) trace.push_back({{"step", row.step}, {"lambda", row.lambda}, {"residual", row.residual}});
	return json{{"lambda_sep", b.lambda_sep}, {"sep_weights", to_json(b.sep)}, {"remainder", maybe_state(b.remainder)},
		{"reconstruction_residual", b.reconstruction_residual},
		{"remainder_has_product_vectors", b.remainder_has_product_vectors}, {"trace", trace}};
}

json to_json(const MeasureResult& m) {
	return json{{"value", m.value}, {"mode", to_string(m.mode)},
		{"achieving_witness", m.achieving_witness ? to_json(m.achieving_witness->op()) : json(nullptr)}};
}

json read_file(const std::string& path) {
	std::ifstream in(path);
	if (!in) throw Error(ErrorCode::invalid_argument, "cannot open " + path, "input");
	try {
		return json::parse(in);
	} catch (const json::parse_error& e) {
		throw Error(ErrorCode::schema, path + ": " + e.what(), "input");
	}
}

HermitianOperator read_operator(const std::string& path) {
	return operator_from_json(read_file(path));
}

void write_file(const std::string& path, const std::string& text) {
	std::ofstream out(path);
	if (!out) throw Error(ErrorCode::invalid_argument, "cannot write " + path, "out");
	out << text;
}

}  // namespace whk::io
