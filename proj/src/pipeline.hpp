#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "graph.hpp"
#include "oinf.hpp"
#include "report.hpp"
#include "spectral.hpp"

namespace gca {

// Report builders behind the CLI subcommands. Each returns a complete
// document; the caller fills in the command echo. Precondition failures of
// explicitly requested computations propagate as precondition_error; the
// `full` pipeline instead stops early and records the reason, since a
// negative verdict is a successful analysis.

Report run_check(const Graph& g);
Report run_spectral(const Graph& g, double beta);
Report run_critical(const Graph& g, const CriticalOptions& opts);
Report run_harmonic(const Graph& g, double beta);
Report run_classify(const Graph& g, double beta);

// beta empty means "at the critical value on the default interval".
Report run_gamma(const Graph& g, std::optional<double> beta, bool verify);

Report run_measure(const Graph& g, double beta, const std::string& path_spec);

Report run_simulate(const Graph& g, double beta, const std::string& vertex_id,
                    int steps, std::int64_t samples, std::uint64_t seed, int workers);

Report run_oinf(const SequenceSpec& s, std::optional<double> beta, bool at_critical,
                bool with_gamma);

Report run_full(const Graph& g);

}  // namespace gca
