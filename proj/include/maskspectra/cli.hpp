#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace maskspectra::cli
{
	enum ExitCode : int
	{
		success = 0,
		usage_error = 2,
		runtime_failure = 3,
	};

	/// Entry point behind the `maskspectra` executable. `args` excludes the
	/// program name. Results go to `out` (or --out), diagnostics to `err`.
	int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);
} // namespace maskspectra::cli
