#pragma once

#include <stdexcept>
#include <string>

namespace whk {

enum class ErrorCode {
	malformed_operator,
	not_positive,
	invalid_argument,
	dims_mismatch,
	generation_failure,
	precondition,
	no_witness_exists,
	inconclusive,
	stratum_violation,
	not_in_observables,
	inconsistency,
	indistinguishable,
	no_separator_found,
	schema,
};

const char* to_string(ErrorCode code);

// Every failure surfaced by the library carries a code; `field` names the
// offending input when one can be identified (used by the CLI error object).
class Error : public std::runtime_error {
	public:
		Error(ErrorCode code, const std::string& message, std::string field = {})
			: std::runtime_error(message), code_(code), field_(std::move(field)) {}

		ErrorCode code() const noexcept { return code_; }
		const std::string& field() const noexcept { return field_; }

	private:
		ErrorCode code_;
		std::string field_;
};

}  // namespace whk
