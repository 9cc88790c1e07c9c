#include "whk/cli.hpp"

#include "whk/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <sstream>

namespace whk::cli {

namespace {

using io::json;

struct NamedCommand {
	const char* name;
	Command command;
};

constexpr NamedCommand kCommands[] = {
	{"classify", Command::classify},
	{"detect", Command::detect},
	{"witness-for", Command::witness_for},
	{"super-witness", Command::super_witness},
	{"ssw", Command::ssw},
	{"common-state", Command::common_state},
	{"common-witness", Command::common_witness},
	{"distinguish", Command::distinguish},
	{"delta", Command::delta},
	{"finer", Command::finer},
	{"optimal", Command::optimal},
	{"edge", Command::edge},
	{"optimize", Command::optimize},
	{"bsa", Command::bsa},
	{"werner-sweep", Command::werner_sweep},
	{"tiles", Command::tiles},
	{"measure", Command::measure},
	{"ces-dim", Command::ces_dim},
	{"separate", Command::separate},
};

std::string num(double v) {
	if (std::isnan(v)) return "nan";
	if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
	// Shortest of %.15g / %.17g that round-trips.
	char buf[32];
	std::snprintf(buf, sizeof buf, "%.15g", v);
	if (std::strtod(buf, nullptr) != v) std::snprintf(buf, sizeof buf, "%.17g", v);
	return buf;
}

SearchOptions search_options(const RunConfig& c) {
	SearchOptions o;
	o.seesaw.starts = c.starts;
	o.seesaw.seed = c.seed;
	o.effort = c.effort;
	o.tol = c.tolerance;
	return o;
}

void require_inputs(const RunConfig& c, size_t n) {
	if (c.input_paths.size() != n) {
		throw Error(ErrorCode::invalid_argument,
			std::string(command_name(c.command)) + " expects " + std::to_string(n) + " input file(s), got " +
			std::to_string(c.input_paths.size()), "inputs");
	}
}

QuantumState read_state(const std::string& path, double tol) {
	return QuantumState::normalized(io::read_operator(path), tol);
}

std::string csv_header(const RunConfig& c) {
	return "# seed=" + std::to_string(c.seed) + " tol=" + num(c.tolerance) + " starts=" + std::to_string(c.starts) + "\n";
}

// Scalar top-level fields of a JSON document as a two-line CSV.
std::string flat_csv(const RunConfig& c, const json& doc) {
	std::string head;
	std::string row;
	for (auto it = doc.begin(); it != doc.end(); ++it) {
		const json& v = it.value();
		if (v.is_structured() || v.is_null()) continue;
		if (!head.empty()) {
			head += ",";
			row += ",";
		}
		head += it.key();
		if (v.is_string()) {
			row += v.get<std::string>();
		} else if (v.is_boolean()) {
			row += v.get<bool>() ? "true" : "false";
		} else if (v.is_number_integer()) {
			row += std::to_string(v.get<long long>());
		} else {
			row += num(v.get<double>());
		}
	}
	return csv_header(c) + head + "\n" + row + "\n";
}

std::vector<double> werner_grid(const RunConfig& c) {
	std::vector<double> grid;
	if (c.steps == 1) {
		grid.push_back(c.p_min);
	} else {
		for (int i = 0; i < c.steps; i++) grid.push_back(c.p_min + (c.p_max - c.p_min) * i / (c.steps - 1));
	}
	return grid;
}

struct Result {
	json doc;
	int exit_code = exit_definite;
	std::optional<std::string> csv;  // preformatted CSV, when the command has one
};

Result dispatch(const RunConfig& c) {
	const SearchOptions opts = search_options(c);
	const double tol = c.tolerance;
	Result r;
	json& d = r.doc;
	switch (c.command) {
		case Command::classify: {
			require_inputs(c, 1);
			ClassLabel label = classify(io::read_operator(c.input_paths[0]), opts);
			d = io::to_json(label);
			if (label.stratum == Stratum::unknown) r.exit_code = exit_inconclusive;
			break;
		}
		case Command::detect: {
			require_inputs(c, 2);
			Witness w = Witness::from_operator(io::read_operator(c.input_paths[0]), opts.seesaw, tol);
			Detection det = detects(w, read_state(c.input_paths[1], tol), tol);
			d = {{"detected", det.detected}, {"value", det.value}};
			break;
		}
		case Command::witness_for: {
			require_inputs(c, 1);
			QuantumState rho = read_state(c.input_paths[0], tol);
			Witness w = witness_for(rho, opts);
			d = {{"witness", io::to_json(w.op())}, {"pairing", w.op().pairing(rho.op())},
				{"block_positivity_exact", w.block_positivity_exact()}, {"min_product_expectation", w.min_product_expectation()}};
			break;
		}
		case Command::super_witness: {
			require_inputs(c, 1);
			Witness w = Witness::from_operator(io::read_operator(c.input_paths[0]), opts.seesaw, tol);
			QuantumState pi = super_witness_for(w, tol);
			d = {{"state", io::to_json(pi.op())}, {"pairing", w.op().pairing(pi.op())}};
			break;
		}
		case Command::ssw: {
			require_inputs(c, 1);
			HermitianOperator o = io::read_operator(c.input_paths[0]);
			QuantumState u = super_super_witness_for(o, opts.seesaw, tol);
			d = {{"state", io::to_json(u.op())}, {"pairing", o.pairing(u.op())}};
			break;
		}
		case Command::common_state: {
			require_inputs(c, 2);
			Witness w1 = Witness::from_operator(io::read_operator(c.input_paths[0]), opts.seesaw, tol);
			Witness w2 = Witness::from_operator(io::read_operator(c.input_paths[1]), opts.seesaw, tol);
			CommonStateResult res = common_detected_state(w1, w2, tol);
			d = {{"state", res.state ? io::to_json(res.state->op()) : json(nullptr)},
				{"blocking_lambda", res.blocking_lambda ? json(*res.blocking_lambda) : json(nullptr)},
				{"best_lambda", res.best_lambda}, {"best_value", res.best_value}};
			break;
		}
		case Command::common_witness: {
			require_inputs(c, 2);
			CommonWitnessResult res = common_witness(read_state(c.input_paths[0], tol), read_state(c.input_paths[1], tol), tol);
			d = {{"witness", res.witness ? io::to_json(res.witness->op()) : json(nullptr)},
				{"blocking_lambda", res.blocking_lambda ? json(*res.blocking_lambda) : json(nullptr)},
				{"best_lambda", res.best_lambda}, {"best_value", res.best_value}, {"exact", res.exact}};
			break;
		}
		case Command::distinguish: {
			require_inputs(c, 2);
			QuantumState r1 = read_state(c.input_paths[0], tol);
			QuantumState r2 = read_state(c.input_paths[1], tol);
			HermitianOperator m = distinguish(r1, r2, tol);
			d = {{"separator", io::to_json(m)}, {"pairing_r1", m.pairing(r1.op())}, {"pairing_r2", m.pairing(r2.op())}};
			break;
		}
		case Command::delta: {
			require_inputs(c, 2);
			d = io::to_json(delta(read_state(c.input_paths[0], tol), read_state(c.input_paths[1], tol), tol));
			break;
		}
		case Command::finer: {
			require_inputs(c, 2);
			d = io::to_json(is_finer(read_state(c.input_paths[0], tol), read_state(c.input_paths[1], tol), opts));
			break;
		}
		case Command::optimal: {
			require_inputs(c, 1);
			OptimalityVerdict v = is_optimal(read_state(c.input_paths[0], tol), opts);
			d = io::to_json(v);
			if (v.low_confidence) r.exit_code = exit_inconclusive;
			break;
		}
		case Command::edge: {
			require_inputs(c, 1);
			d = {{"edge", is_edge(read_state(c.input_paths[0], tol), opts)}};
			break;
		}
		case Command::optimize:
		case Command::bsa: {
			require_inputs(c, 1);
			BSAResult b = optimize(read_state(c.input_paths[0], tol), c.max_steps, opts);
			d = io::to_json(b);
			std::string csv = csv_header(c) + "step,lambda,residual\n";
			for (const auto& row : b.trace) csv += std::to_string(row.step) + "," + num(row.lambda) + "," + num(row.residual) + "\n";
			r.csv = csv;
			break;
		}
		case Command::werner_sweep: {
			require_inputs(c, 0);
			r.csv = sweep(c, werner_grid(c));
			break;
		}
		case Command::tiles: {
			require_inputs(c, 0);
			UPBSpec upb = tiles_upb(opts.seesaw);
			QuantumState rho = upb_complement_state(upb);
			d = {{"upb", io::to_json(upb)}, {"state", io::to_json(rho.op())}, {"ppt", is_ppt(rho, tol)},
				{"ppt_min_eigenvalue", rho.ppt_min_eigenvalue()}};
			break;
		}
		case Command::measure: {
			require_inputs(c, 1);
			d = io::to_json(measure(read_state(c.input_paths[0], tol), opts));
			break;
		}
		case Command::ces_dim: {
			require_inputs(c, 0);
			d = {{"dims", c.ces_dims}, {"ces_max_dim", ces_max_dim(c.ces_dims)}};
			break;
		}
		case Command::separate: {
			if (c.input_paths.empty()) {
				throw Error(ErrorCode::invalid_argument, "separate expects a target file and sample files", "inputs");
			}
			HermitianOperator target = io::read_operator(c.input_paths[0]);
			std::vector<HermitianOperator> samples;
			for (size_t i = 1; i < c.input_paths.size(); i++) samples.push_back(io::read_operator(c.input_paths[i]));
			Rng rng(c.seed);
			for (int i = 0; i < c.random_products; i++) samples.push_back(rng.product_vector(target.dims()).projector());
			try {
				d = io::to_json(separate(target, samples, c.iters, tol));
				d["separated"] = true;
			} catch (const Error& e) {
				if (e.code() != ErrorCode::no_separator_found) throw;
				d = {{"separated", false}, {"reason", e.what()}};
				r.exit_code = exit_inconclusive;
			}
			break;
		}
	}
	return r;
}

}  // namespace

Command parse_command(const std::string& name) {
	for (const auto& nc : kCommands) {
		if (name == nc.name) return nc.command;
	}
	throw Error(ErrorCode::invalid_argument, "unknown command '" + name + "'", "command");
}

const char* command_name(Command c) {
	for (const auto& nc : kCommands) {
		if (nc.command == c) return nc.name;
	}
	return "unknown";
}

std::vector<std::string> command_names() {
	std::vector<std::string> out;
	for (const auto& nc : kCommands) out.emplace_back(nc.name);
	return out;
}

double default_tolerance() {
	const char* env = std::getenv("WHK_DEFAULT_TOL");
	if (env == nullptr || *env == '\0') return kDefaultTol;
	char* end = nullptr;
	double v = std::strtod(env, &end);
	if (end == env || *end != '\0' || !(v > 0.0) || !std::isfinite(v)) {
		throw Error(ErrorCode::invalid_argument, std::string("WHK_DEFAULT_TOL is not a positive number: ") + env, "WHK_DEFAULT_TOL");
	}
	return v;
}

void RunConfig::validate() const {
	if (!(tolerance > 0.0) || !std::isfinite(tolerance)) throw Error(ErrorCode::invalid_argument, "tolerance must be positive", "tol");
	if (starts < 1) throw Error(ErrorCode::invalid_argument, "starts must be at least 1", "starts");
	if (effort < 1) throw Error(ErrorCode::invalid_argument, "effort must be at least 1", "effort");
	if (max_steps < 0) throw Error(ErrorCode::invalid_argument, "max-steps must be non-negative", "max-steps");
}

std::string error_document(const std::string& code, const std::string& field, const std::string& message) {
	json err{{"code", code}, {"field", field.empty() ? json(nullptr) : json(field)}, {"message", message}};
	return json{{"error", err}}.dump(2) + "\n";
}

RunOutput execute(const RunConfig& config) {
	RunOutput out;
	try {
		config.validate();
		Result r = dispatch(config);
		out.exit_code = r.exit_code;
		// Sweeps are plot data, so they are always CSV.
		if (config.format == Format::csv || config.command == Command::werner_sweep) {
			out.text = r.csv ? *r.csv : flat_csv(config, r.doc);
		} else {
			json doc{{"command", command_name(config.command)}, {"seed", config.seed}, {"tol", config.tolerance},
				{"starts", config.starts}};
			doc.update(r.doc);
			out.text = doc.dump(2) + "\n";
		}
	} catch (const Error& e) {
		out.exit_code = e.code() == ErrorCode::inconclusive ? exit_inconclusive : exit_error;
		out.text = error_document(to_string(e.code()), e.field(), e.what());
	} catch (const std::exception& e) {
		out.exit_code = exit_error;
		out.text = error_document("internal", "", e.what());
	}
	return out;
}

int run(const RunConfig& config, std::ostream& out) {
	RunOutput result = execute(config);
	if (config.output_path && result.exit_code != exit_error) {
		try {
			io::write_file(*config.output_path, result.text);
		} catch (const Error& e) {
			out << error_document(to_string(e.code()), e.field(), e.what());
			return exit_error;
		}
	} else {
		out << result.text;
	}
	return result.exit_code;
}

std::string sweep(const RunConfig& config, const std::vector<double>& grid) {
	if (grid.empty()) throw Error(ErrorCode::invalid_argument, "parameter grid is empty", "grid");
	for (size_t i = 0; i < grid.size(); i++) {
		if (!(grid[i] >= 0.0 && grid[i] <= 1.0)) {
			throw Error(ErrorCode::invalid_argument, "grid values must lie in [0, 1]", "grid");
		}
		if (i > 0 && !(grid[i] > grid[i - 1])) {
			throw Error(ErrorCode::invalid_argument, "grid must be strictly ascending", "grid");
		}
	}
	const SearchOptions opts = search_options(config);
	const double tol = config.tolerance;
	const QuantumState psi = QuantumState::pure(Dims{2, 2}, bell_phi_plus());
	const HermitianOperator w = partial_transpose(HermitianOperator::projector(Dims{2, 2}, singlet()));

	std::string columns;
	switch (config.command) {
		case Command::werner_sweep: columns = "p,trace_pairing,class,measure,delta_singlet"; break;
		case Command::classify: columns = "p,class,sub"; break;
		case Command::measure: columns = "p,measure,mode"; break;
		case Command::delta: columns = "p,delta,mu_star"; break;
		case Command::optimize:
		case Command::bsa: columns = "p,lambda_sep,reconstruction_residual,remainder_purity"; break;
		default:
			throw Error(ErrorCode::invalid_argument,
				std::string("command '") + command_name(config.command) + "' has no Werner-line sweep", "command");
	}
	std::ostringstream out;
	out << csv_header(config) << columns << "\n";
	for (double p : grid) {
		QuantumState rho = werner(p);
		out << num(p);
		switch (config.command) {
			case Command::werner_sweep: {
				ClassLabel label = classify(rho.op(), opts);
				out << "," << num(w.pairing(rho.op())) << "," << to_string(label.stratum) << ","
					<< num(measure(rho, opts).value) << "," << num(delta(rho, psi, tol).delta);
				break;
			}
			case Command::classify: {
				ClassLabel label = classify(rho.op(), opts);
				out << "," << to_string(label.stratum) << "," << (label.sub ? to_string(*label.sub) : "");
				break;
			}
			case Command::measure: {
				MeasureResult m = measure(rho, opts);
				out << "," << num(m.value) << "," << to_string(m.mode);
				break;
			}
			case Command::delta: {
				DeltaResult dr = delta(rho, psi, tol);
				out << "," << num(dr.delta) << "," << num(dr.mu_star);
				break;
			}
			default: {
				BSAResult b = optimize(rho, config.max_steps, opts);
				out << "," << num(b.lambda_sep) << "," << num(b.reconstruction_residual) << ","
					<< (b.remainder ? num(b.remainder->purity()) : "");
				break;
			}
		}
		out << "\n";
	}
	return out.str();
}

}  // namespace whk::cli
