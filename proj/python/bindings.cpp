#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "whk/constructions.hpp"
#include "whk/hierarchy.hpp"
#include "whk/order.hpp"

namespace py = pybind11;
using namespace whk;

namespace {

Dims to_dims(const std::pair<int, int>& d) { return Dims{d.first, d.second}; }

HermitianOperator to_op(const Matrix& m, const std::pair<int, int>& dims) {
	return HermitianOperator(to_dims(dims), m);
}

QuantumState to_state(const Matrix& m, const std::pair<int, int>& dims) {
	return QuantumState::from_operator(to_op(m, dims));
}

SearchOptions options(int starts, std::uint64_t seed) {
	SearchOptions o;
	o.seesaw.starts = starts;
	o.seesaw.seed = seed;
	return o;
}

py::dict product_terms(const ProductDecomposition& d) {
	py::list weights;
	py::list vectors;
	for (size_t i = 0; i < d.weights.size(); i++) {
		weights.append(d.weights[i]);
		vectors.append(py::make_tuple(d.vectors[i].e, d.vectors[i].f));
	}
	py::dict out;
	out["weights"] = weights;
	out["vectors"] = vectors;
	return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
	m.doc() = "Entanglement witnesses, their duals and the finer order on states.";

	static py::exception<Error> error(m, "WhkError", PyExc_ValueError);
	py::register_exception_translator([](std::exception_ptr p) {
		try {
			if (p) std::rethrow_exception(p);
		} catch (const Error& e) {
			std::string msg = std::string(to_string(e.code())) + ": " + e.what();
			if (!e.field().empty()) msg += " [" + e.field() + "]";
			error(msg.c_str());
		}
	});

	m.def("partial_transpose", [](const Matrix& x, std::pair<int, int> dims) {
		return partial_transpose(to_op(x, dims)).matrix();
	}, py::arg("op"), py::arg("dims") = std::pair<int, int>{2, 2});

	m.def("werner", [](double p) { return werner(p).op().matrix(); }, py::arg("p"));

	m.def("tiles_state", []() { return upb_complement_state(tiles_upb()).op().matrix(); });

	m.def("ces_max_dim", &ces_max_dim, py::arg("dims"));

	m.def("classify", [](const Matrix& x, std::pair<int, int> dims, int starts, std::uint64_t seed) {
		ClassLabel l = classify(to_op(x, dims), options(starts, seed));
		py::dict out;
		out["stratum"] = to_string(l.stratum);
		out["sub"] = l.sub ? py::object(py::str(to_string(*l.sub))) : py::object(py::none());
		out["exact"] = l.exact;
		return out;
	}, py::arg("op"), py::arg("dims") = std::pair<int, int>{2, 2}, py::arg("starts") = 64, py::arg("seed") = 0);

	m.def("witness_for", [](const Matrix& rho, std::pair<int, int> dims, int starts, std::uint64_t seed) {
		return witness_for(to_state(rho, dims), options(starts, seed)).op().matrix();
	}, py::arg("rho"), py::arg("dims") = std::pair<int, int>{2, 2}, py::arg("starts") = 64, py::arg("seed") = 0);

	m.def("super_witness_for", [](const Matrix& w, std::pair<int, int> dims) {
		return super_witness_for(Witness::from_operator(to_op(w, dims))).op().matrix();
	}, py::arg("w"), py::arg("dims") = std::pair<int, int>{2, 2});

	m.def("distinguish", [](const Matrix& r1, const Matrix& r2, std::pair<int, int> dims) {
		return distinguish(to_state(r1, dims), to_state(r2, dims)).matrix();
	}, py::arg("rho1"), py::arg("rho2"), py::arg("dims") = std::pair<int, int>{2, 2});

	m.def("delta", [](const Matrix& r1, const Matrix& r2, std::pair<int, int> dims) {
		DeltaResult r = delta(to_state(r1, dims), to_state(r2, dims));
		py::dict out;
		out["delta"] = r.delta;
		out["mu_star"] = r.mu_star;
		out["support_contained"] = r.support_contained;
		return out;
	}, py::arg("rho1"), py::arg("rho2"), py::arg("dims") = std::pair<int, int>{2, 2});

	m.def("is_finer", [](const Matrix& r1, const Matrix& r2, std::pair<int, int> dims) {
		FinerVerdict f = is_finer(to_state(r1, dims), to_state(r2, dims));
		py::dict out;
		out["finer"] = f.finer;
		out["epsilon"] = f.epsilon;
		out["p"] = f.p ? py::cast(Matrix(f.p->op().matrix())) : py::object(py::none());
		out["counterexample"] = f.counterexample ? py::cast(Matrix(f.counterexample->matrix())) : py::object(py::none());
		return out;
	}, py::arg("rho1"), py::arg("rho2"), py::arg("dims") = std::pair<int, int>{2, 2});

	m.def("is_optimal", [](const Matrix& rho, std::pair<int, int> dims, int starts, std::uint64_t seed) {
		OptimalityVerdict v = is_optimal(to_state(rho, dims), options(starts, seed));
		py::dict out;
		out["optimal"] = v.optimal;
		out["range_gap"] = v.range_gap;
		out["low_confidence"] = v.low_confidence;
		out["epsilon"] = v.epsilon;
		if (v.witness_vector) {
			out["witness_vector"] = py::make_tuple(v.witness_vector->e, v.witness_vector->f);
		} else {
			out["witness_vector"] = py::none();
		}
		return out;
	}, py::arg("rho"), py::arg("dims") = std::pair<int, int>{2, 2}, py::arg("starts") = 64, py::arg("seed") = 0);

	m.def("is_edge", [](const Matrix& rho, std::pair<int, int> dims, int starts, std::uint64_t seed) {
		return is_edge(to_state(rho, dims), options(starts, seed));
	}, py::arg("rho"), py::arg("dims") = std::pair<int, int>{3, 3}, py::arg("starts") = 64, py::arg("seed") = 0);

	m.def("optimize", [](const Matrix& rho, std::pair<int, int> dims, int max_steps, std::uint64_t seed) {
		QuantumState state = to_state(rho, dims);
		BSAResult r;
		{
			py::gil_scoped_release release;
			r = optimize(state, max_steps, options(64, seed));
		}
		py::dict out;
		out["lambda_sep"] = r.lambda_sep;
		out["sep"] = product_terms(r.sep);
		out["remainder"] = r.remainder ? py::cast(Matrix(r.remainder->op().matrix())) : py::object(py::none());
		out["reconstruction_residual"] = r.reconstruction_residual;
		out["remainder_has_product_vectors"] = r.remainder_has_product_vectors;
		return out;
	}, py::arg("rho"), py::arg("dims") = std::pair<int, int>{2, 2}, py::arg("max_steps") = 200, py::arg("seed") = 0);

	m.def("measure", [](const Matrix& rho, std::pair<int, int> dims) {
		MeasureResult r = measure(to_state(rho, dims));
		py::dict out;
		out["value"] = r.value;
		out["mode"] = to_string(r.mode);
		out["witness"] = r.achieving_witness ? py::cast(Matrix(r.achieving_witness->op().matrix())) : py::object(py::none());
		return out;
	}, py::arg("rho"), py::arg("dims") = std::pair<int, int>{2, 2});
}
