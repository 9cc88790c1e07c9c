#include "whk/cli.hpp"
#include "whk/error.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

int main(int argc, char** argv) {
	using namespace whk::cli;

	RunConfig config;
	try {
		config.tolerance = default_tolerance();
	} catch (const whk::Error& e) {
		std::cout << error_document(whk::to_string(e.code()), e.field(), e.what());
		return exit_error;
	}

	CLI::App app{"Entanglement witness hierarchy toolkit"};
	std::string command;
	std::string format = "json";
	std::string out_path;
	std::string commands;
	for (const auto& n : command_names()) commands += (commands.empty() ? "" : ", ") + n;

	app.add_option("command", command, "One of: " + commands)->required();
	app.add_option("inputs", config.input_paths, "Operator / UPB JSON files");
	app.add_option("--tol", config.tolerance, "Relative tolerance (default 1e-9, or WHK_DEFAULT_TOL)");
	app.add_option("--seed", config.seed, "Random seed");
	app.add_option("--starts", config.starts, "See-saw starts");
	app.add_option("--out", out_path, "Write output here instead of stdout");
	app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
	app.add_option("--effort", config.effort, "Separability search budget");
	app.add_option("--max-steps", config.max_steps, "Optimizer step budget");
	app.add_option("--p-min", config.p_min, "Sweep start");
	app.add_option("--p-max", config.p_max, "Sweep end");
	app.add_option("--steps", config.steps, "Sweep points");
	app.add_option("--dims", config.ces_dims, "Local dimensions for ces-dim")->delimiter(',');
	app.add_option("--iters", config.iters, "Iteration budget for separate");
	app.add_option("--random-products", config.random_products, "Random product projectors added to separate's samples");

	try {
		app.parse(argc, argv);
	} catch (const CLI::CallForHelp& e) {
		return app.exit(e);
	} catch (const CLI::ParseError& e) {
		std::cout << error_document("invalid_argument", "", e.what());
		return exit_error;
	}

	try {
		config.command = parse_command(command);
	} catch (const whk::Error& e) {
		std::cout << error_document(whk::to_string(e.code()), e.field(), e.what());
		return exit_error;
	}
	config.format = format == "csv" ? Format::csv : Format::json;
	if (!out_path.empty()) config.output_path = out_path;
	return run(config, std::cout);
}
