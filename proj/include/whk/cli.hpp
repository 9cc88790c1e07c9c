#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace whk::cli {

enum class Command {
	classify,
	detect,
	witness_for,
	super_witness,
	ssw,
	common_state,
	common_witness,
	distinguish,
	delta,
	finer,
	optimal,
	edge,
	optimize,
	bsa,
	werner_sweep,
	tiles,
	measure,
	ces_dim,
	separate,
};

enum class Format { json, csv };

// Throws Error(invalid_argument) on an unknown name.
Command parse_command(const std::string& name);
const char* command_name(Command c);
std::vector<std::string> command_names();

// 1e-9 unless WHK_DEFAULT_TOL holds a positive number.
double default_tolerance();

struct RunConfig {
	Command command = Command::classify;
	double tolerance = 1e-9;
	std::uint64_t seed = 0;
	int starts = 64;
	std::vector<std::string> input_paths;
	std::optional<std::string> output_path;
	Format format = Format::json;

	int effort = 64;
	int max_steps = 200;
	double p_min = 0.0;
	double p_max = 1.0;
	int steps = 101;
	std::vector<int> ces_dims;
	int iters = 1000;
	// For separate: extra random product projectors added to the cone samples.
	int random_products = 0;

	void validate() const;
};

enum ExitCode { exit_definite = 0, exit_error = 1, exit_inconclusive = 2 };

struct RunOutput {
	int exit_code = exit_definite;
	std::string text;
};

// Executes the command and returns the document that `run` would write.
RunOutput execute(const RunConfig& config);

// Writes the document to config.output_path or `out`; errors become a JSON
// error object on `out` with exit code 1.
int run(const RunConfig& config, std::ostream& out);

// One CSV row per grid point (ascending, nonempty) with every scalar output of
// the command applied along the Werner line.
std::string sweep(const RunConfig& config, const std::vector<double>& grid);

std::string error_document(const std::string& code, const std::string& field, const std::string& message);

}  // namespace whk::cli
