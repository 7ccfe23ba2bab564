#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qosc/market.hpp"

namespace qosc {

enum class ModelKind { Bs, Oscillator, Susy, Finite };

/// Fully resolved run parameters shared by every command.
struct RunConfig {
    ModelKind model = ModelKind::Bs;
    OptionKind kind = OptionKind::Call;
    double sigma = 0.0;
    double r = 0.0;
    double maturity = 0.0;            // config key: T
    std::optional<double> strike;     // price-space strike (continuous models)
    std::optional<int> strike_index;  // grid strike exponent (finite model)
    int d = 21;                       // finite grid dimension
    int truncation = 48;              // spectral series length (config key: N)
    std::optional<double> alpha;      // partner-basis parameter (susy model)
    std::optional<double> domain_a;   // truncation band (continuous models)
    std::optional<double> domain_b;
    std::vector<double> times;        // evaluation times, default {0}
    std::vector<double> spots;        // evaluation spots, default {strike}
};

/// Parses a flat key=value document: '#' starts a comment, [section] header
/// lines are skipped, and a key given twice keeps its last value.  Recognized
/// keys: preset, model, kind, sigma, r, T, strike, strike_index, d, N, alpha,
/// a, b, times, S (the last two comma-separated lists).  `preset=fig1`
/// expands to the canonical chart parameters (model=finite, sigma=0.25,
/// r=0.03, d=21, strike_index=8, T=5, times={3,4,5}) before any explicit key
/// applies, so explicit keys override the preset regardless of position.
///
/// Returns the validated config with defaults applied: N=48, d=21, times={0},
/// spots={strike}, band a = K e^{-6}, b = K e^{6}.  Throws ConfigError on
/// unknown keys, malformed values, missing required fields ("missing field:
/// <name>"), even d ("d must be odd"), a susy model without alpha, or times
/// past maturity; alpha outside the admissibility bound propagates the
/// DomainError that quotes the bound.
RunConfig parse_config(const std::string& text);

enum class Command { Price, ReproduceFig1, DumpBasis, Compare, Validate };

/// Executes one command against a parsed config.
///   price          CSV of prices on `out` (S,t,V — or m,S,t,V for finite)
///   reproduce-fig1 writes fig1_call.csv, fig1_put.csv, fig1.svg into
///                  out_dir; echoes the strike and the near-strike agreement
///                  report (with `warning:` lines past the soft ceiling) on out
///   dump-basis     CSV of basis samples on `out` (x,psi_n / x,phi_n columns,
///                  x in [-6, 6] step 0.05; or m,x,h_n over the finite grid)
///   compare        CSV on `out`: finite vs spectral vs closed-form prices at
///                  the five grid points around the strike, with pairwise
///                  relative deviations
///   validate       runs the invariant suite, one pass/fail line per property
///                  on `out`; returns the number of failures
/// Returns the process exit status (0 on success); failures inside commands
/// are reported by throwing (the caller formats the error line).
int run_command(const RunConfig& config, Command command, const std::string& out_dir,
                std::ostream& out, std::ostream& err);

/// argv-level entry point: subcommand dispatch (price, reproduce-fig1,
/// dump-basis, compare, validate), --config/--out handling, value overrides
/// (--model, --sigma, --r, --strike, --T), and error trapping.  Commands
/// without --config fall back to the fig1 preset (reproduce-fig1 and validate
/// ignore the config anyway; the other commands require --config).  Every
/// failure prints a single line starting with "error: " on err and returns
/// nonzero.
int pricer_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace qosc
