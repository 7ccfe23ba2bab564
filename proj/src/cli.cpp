#include "qosc/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string_view>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "qosc/errors.hpp"
#include "qosc/finite.hpp"
#include "qosc/finite_pricer.hpp"
#include "qosc/format.hpp"
#include "qosc/hermite.hpp"
#include "qosc/numerics.hpp"
#include "qosc/spectral.hpp"
#include "qosc/susy.hpp"

namespace qosc {

namespace {

// ---------------------------------------------------------------------------
// config parsing
// ---------------------------------------------------------------------------

std::string trim(std::string_view s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string_view::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return std::string{s.substr(begin, end - begin + 1)};
}

double parse_double_value(const std::string& key, const std::string& text) {
    double value{};
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), last, value);
    if (ec != std::errc{} || ptr != last || !std::isfinite(value)) {
        throw ConfigError("invalid numeric value for " + key + ": '" + text + "'");
    }
    return value;
}

int parse_int_value(const std::string& key, const std::string& text) {
    int value{};
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), last, value);
    if (ec != std::errc{} || ptr != last) {
        throw ConfigError("invalid integer value for " + key + ": '" + text + "'");
    }
    return value;
}

std::vector<double> parse_list_value(const std::string& key, const std::string& text) {
    std::vector<double> values;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::size_t end = (comma == std::string::npos) ? text.size() : comma;
        const std::string item = trim(std::string_view{text}.substr(start, end - start));
        if (item.empty()) throw ConfigError("empty entry in list value for " + key);
        values.push_back(parse_double_value(key, item));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (values.empty()) throw ConfigError("empty list value for " + key);
    return values;
}

ModelKind parse_model_value(const std::string& text) {
    if (text == "bs") return ModelKind::Bs;
    if (text == "oscillator") return ModelKind::Oscillator;
    if (text == "susy") return ModelKind::Susy;
    if (text == "finite") return ModelKind::Finite;
    throw ConfigError("unknown model: '" + text + "' (expected bs|oscillator|susy|finite)");
}

OptionKind parse_kind_value(const std::string& text) {
    if (text == "call") return OptionKind::Call;
    if (text == "put") return OptionKind::Put;
    throw ConfigError("unknown kind: '" + text + "' (expected call|put)");
}

/// Pre-validation accumulator: optionals record which keys appeared.
struct RawConfig {
    std::optional<ModelKind> model;
    std::optional<OptionKind> kind;
    std::optional<double> sigma, r, maturity, strike, alpha, a, b;
    std::optional<int> strike_index, d, truncation;
    std::optional<std::vector<double>> times, spots;
};

void apply_key(RawConfig& raw, const std::string& key, const std::string& value) {
    if (key == "model") {
        raw.model = parse_model_value(value);
    } else if (key == "kind") {
        raw.kind = parse_kind_value(value);
    } else if (key == "sigma") {
        raw.sigma = parse_double_value(key, value);
    } else if (key == "r") {
        raw.r = parse_double_value(key, value);
    } else if (key == "T") {
        raw.maturity = parse_double_value(key, value);
    } else if (key == "strike") {
        raw.strike = parse_double_value(key, value);
    } else if (key == "strike_index") {
        raw.strike_index = parse_int_value(key, value);
    } else if (key == "d") {
        raw.d = parse_int_value(key, value);
    } else if (key == "N") {
        raw.truncation = parse_int_value(key, value);
    } else if (key == "alpha") {
        raw.alpha = parse_double_value(key, value);
    } else if (key == "a") {
        raw.a = parse_double_value(key, value);
    } else if (key == "b") {
        raw.b = parse_double_value(key, value);
    } else if (key == "times") {
        raw.times = parse_list_value(key, value);
    } else if (key == "S") {
        raw.spots = parse_list_value(key, value);
    } else {
        throw ConfigError("unknown key: '" + key + "'");
    }
}

void apply_fig1_preset(RawConfig& raw) {
    raw.model = ModelKind::Finite;
    raw.sigma = 0.25;
    raw.r = 0.03;
    raw.d = 21;
    raw.strike_index = 8;
    raw.maturity = 5.0;
    raw.times = std::vector<double>{3.0, 4.0, 5.0};
}

// ---------------------------------------------------------------------------
// command implementations
// ---------------------------------------------------------------------------

PricingBasis make_basis(const RunConfig& config) {
    if (config.model == ModelKind::Susy) {
        return PricingBasis::susy(make_susy_params(*config.alpha), config.truncation - 1);
    }
    return PricingBasis::oscillator(config.truncation - 1);
}

int run_price(const RunConfig& config, std::ostream& out) {
    const MarketParams params = make_market_params(config.sigma, config.r);
    if (config.model == ModelKind::Finite) {
        const DiscreteMarket market = make_discrete_market(
            diagonalize(config.d), params, *config.strike_index, config.maturity);
        const std::vector<double> coeffs =
            finite_coefficients(market, discrete_payoff(market, config.kind));
        const FiniteGrid& grid = market.oscillator.grid;
        out << "m,S,t,V\n";
        for (double t : config.times) {
            for (int m = -grid.ell; m <= grid.ell; ++m) {
                const double spot = std::exp(grid.points[static_cast<std::size_t>(m + grid.ell)]);
                out << m << ',' << format_sig(spot) << ',' << format_sig(t) << ','
                    << format_sig(finite_price(market, coeffs, m, t)) << '\n';
            }
        }
        return 0;
    }
    const OptionSpec spec = make_option_spec(config.kind, *config.strike, config.maturity);
    out << "S,t,V\n";
    if (config.model == ModelKind::Bs) {
        for (double t : config.times) {
            for (double spot : config.spots) {
                out << format_sig(spot) << ',' << format_sig(t) << ','
                    << format_sig(bs_price(spot, t, spec, params)) << '\n';
            }
        }
        return 0;
    }
    const LogDomain domain = make_log_domain(*config.domain_a, *config.domain_b);
    const SpectralSolution solution =
        build_solution(spec, params, make_basis(config), domain, config.truncation);
    for (double t : config.times) {
        for (double spot : config.spots) {
            out << format_sig(spot) << ',' << format_sig(t) << ','
                << format_sig(price(solution, spot, t)) << '\n';
        }
    }
    return 0;
}

int run_dump_basis(const RunConfig& config, std::ostream& out) {
    if (config.model == ModelKind::Finite) {
        const FiniteOscillator osc = diagonalize(config.d);
        const std::size_t d = static_cast<std::size_t>(config.d);
        out << "m,x";
        for (std::size_t n = 0; n < d; ++n) out << ",h_" << n;
        out << '\n';
        for (int m = -osc.grid.ell; m <= osc.grid.ell; ++m) {
            const std::size_t i = static_cast<std::size_t>(m + osc.grid.ell);
            out << m << ',' << format_sig(osc.grid.points[i]);
            for (std::size_t n = 0; n < d; ++n) out << ',' << format_sig(osc.harpers(i, n));
            out << '\n';
        }
        return 0;
    }
    if (config.model == ModelKind::Bs) {
        throw ConfigError("dump-basis requires model=oscillator, susy, or finite");
    }
    const int columns = std::min(config.truncation, 9);
    const char* prefix = (config.model == ModelKind::Susy) ? "phi_" : "psi_";
    const PricingBasis basis = make_basis(config);
    out << "x";
    for (int n = 0; n < columns; ++n) out << ',' << prefix << n;
    out << '\n';
    for (int i = 0; i <= 240; ++i) {
        const double x = -6.0 + 0.05 * static_cast<double>(i);
        const std::vector<double> values = basis.eval_all(x);
        out << format_sig(x);
        for (int n = 0; n < columns; ++n) out << ',' << format_sig(values[static_cast<std::size_t>(n)]);
        out << '\n';
    }
    return 0;
}

double pairwise_deviation(double u, double v) {
    const double scale = std::max(std::abs(u), std::abs(v));
    if (scale == 0.0) return 0.0;
    return std::abs(u - v) / scale;
}

int run_compare(const RunConfig& config, std::ostream& out) {
    if (!config.strike_index) {
        throw ConfigError("compare requires strike_index (shared points sit on the finite grid)");
    }
    const MarketParams params = make_market_params(config.sigma, config.r);
    const DiscreteMarket market = make_discrete_market(diagonalize(config.d), params,
                                                       *config.strike_index, config.maturity);
    const std::vector<double> coeffs =
        finite_coefficients(market, discrete_payoff(market, config.kind));
    const double strike = discrete_strike(market);
    const OptionSpec spec = make_option_spec(config.kind, strike, config.maturity);
    const LogDomain domain = (config.domain_a && config.domain_b)
                                 ? make_log_domain(*config.domain_a, *config.domain_b)
                                 : default_domain(strike);
    const SpectralSolution solution =
        build_solution(spec, params, make_basis(config), domain, config.truncation);
    const FiniteGrid& grid = market.oscillator.grid;
    out << "m,S,t,V_finite,V_spectral,V_bs,dev_finite_spectral,dev_finite_bs,dev_spectral_bs\n";
    for (double t : config.times) {
        for (int m = *config.strike_index - 2; m <= *config.strike_index + 2; ++m) {
            if (m < -grid.ell || m > grid.ell) continue;
            const double spot = std::exp(grid.points[static_cast<std::size_t>(m + grid.ell)]);
            const double v_finite = finite_price(market, coeffs, m, t);
            const double v_spectral = price(solution, spot, t);
            const double v_bs = bs_price(spot, t, spec, params);
            out << m << ',' << format_sig(spot) << ',' << format_sig(t) << ','
                << format_sig(v_finite) << ',' << format_sig(v_spectral) << ','
                << format_sig(v_bs) << ',' << format_sig(pairwise_deviation(v_finite, v_spectral))
                << ',' << format_sig(pairwise_deviation(v_finite, v_bs)) << ','
                << format_sig(pairwise_deviation(v_spectral, v_bs)) << '\n';
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------
// fig1: SVG rendering and the reproduce command
// ---------------------------------------------------------------------------

const char* kSeriesColors[3] = {"#4c78a8", "#e45756", "#54a24b"};

void append_marker(std::string& svg, int series, double cx, double cy, const char* color) {
    const std::string x = format_sig(cx, 6);
    const std::string y = format_sig(cy, 6);
    if (series == 0) { // square
        svg += "<rect x=\"" + format_sig(cx - 3.0, 6) + "\" y=\"" + format_sig(cy - 3.0, 6) +
               "\" width=\"6\" height=\"6\" fill=\"" + color + "\"/>\n";
    } else if (series == 1) { // diamond
        svg += "<path d=\"M " + x + " " + format_sig(cy - 4.0, 6) + " L " +
               format_sig(cx + 4.0, 6) + " " + y + " L " + x + " " + format_sig(cy + 4.0, 6) +
               " L " + format_sig(cx - 4.0, 6) + " " + y + " Z\" fill=\"" + color + "\"/>\n";
    } else { // circle
        svg += "<circle cx=\"" + x + "\" cy=\"" + y + "\" r=\"3\" fill=\"" + color + "\"/>\n";
    }
}

void append_panel(std::string& svg, const Fig1Dataset& data,
                  const std::vector<PriceCurve>& curves, const char* panel_label,
                  double top) {
    const FiniteGrid& grid = data.market.oscillator.grid;
    const double left = 70.0, right = 600.0;
    const double bottom = top + 230.0;
    double lo = 0.0, hi = 0.0;
    for (const PriceCurve& curve : curves) {
        for (double v : curve.values) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (hi <= lo) hi = lo + 1.0;
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
    const auto px = [&](int m) {
        return left + (static_cast<double>(m + grid.ell) / static_cast<double>(grid.d - 1)) *
                          (right - left);
    };
    const auto py = [&](double v) { return bottom - (v - lo) / (hi - lo) * (bottom - top); };

    // frame and axes
    svg += "<rect x=\"" + format_sig(left, 6) + "\" y=\"" + format_sig(top, 6) + "\" width=\"" +
           format_sig(right - left, 6) + "\" height=\"" + format_sig(bottom - top, 6) +
           "\" fill=\"none\" stroke=\"#444444\"/>\n";
    svg += "<text x=\"" + format_sig(left + 8.0, 6) + "\" y=\"" + format_sig(top + 18.0, 6) +
           "\" font-family=\"monospace\" font-size=\"14\" fill=\"#222222\">" +
           std::string(panel_label) + "</text>\n";

    // y ticks
    for (int i = 0; i <= 4; ++i) {
        const double v = lo + (hi - lo) * static_cast<double>(i) / 4.0;
        const double y = py(v);
        svg += "<line x1=\"" + format_sig(left - 4.0, 6) + "\" y1=\"" + format_sig(y, 6) +
               "\" x2=\"" + format_sig(left, 6) + "\" y2=\"" + format_sig(y, 6) +
               "\" stroke=\"#444444\"/>\n";
        svg += "<text x=\"" + format_sig(left - 8.0, 6) + "\" y=\"" + format_sig(y + 4.0, 6) +
               "\" font-family=\"monospace\" font-size=\"11\" fill=\"#222222\" "
               "text-anchor=\"end\">" +
               format_sig(v, 4) + "</text>\n";
    }
    // x ticks at multiples of 5
    for (int m = -grid.ell; m <= grid.ell; ++m) {
        if (m % 5 != 0) continue;
        const double x = px(m);
        svg += "<line x1=\"" + format_sig(x, 6) + "\" y1=\"" + format_sig(bottom, 6) +
               "\" x2=\"" + format_sig(x, 6) + "\" y2=\"" + format_sig(bottom + 4.0, 6) +
               "\" stroke=\"#444444\"/>\n";
        svg += "<text x=\"" + format_sig(x, 6) + "\" y=\"" + format_sig(bottom + 16.0, 6) +
               "\" font-family=\"monospace\" font-size=\"11\" fill=\"#222222\" "
               "text-anchor=\"middle\">" +
               std::to_string(m) + "</text>\n";
    }
    svg += "<text x=\"" + format_sig((left + right) / 2.0, 6) + "\" y=\"" +
           format_sig(bottom + 32.0, 6) +
           "\" font-family=\"monospace\" font-size=\"12\" fill=\"#222222\" "
           "text-anchor=\"middle\">grid index m (S = e^{m sqrt(kappa)})</text>\n";

    // strike marker
    const double strike_x = px(data.market.strike_index);
    svg += "<line x1=\"" + format_sig(strike_x, 6) + "\" y1=\"" + format_sig(top, 6) +
           "\" x2=\"" + format_sig(strike_x, 6) + "\" y2=\"" + format_sig(bottom, 6) +
           "\" stroke=\"#999999\" stroke-dasharray=\"4 3\"/>\n";
    svg += "<text x=\"" + format_sig(strike_x + 4.0, 6) + "\" y=\"" +
           format_sig(top + 18.0, 6) +
           "\" font-family=\"monospace\" font-size=\"11\" fill=\"#666666\">K</text>\n";

    // series: polyline plus markers
    for (std::size_t s = 0; s < curves.size(); ++s) {
        const char* color = kSeriesColors[s % 3];
        svg += "<polyline fill=\"none\" stroke=\"";
        svg += color;
        svg += "\" stroke-width=\"1.5\" points=\"";
        for (int m = -grid.ell; m <= grid.ell; ++m) {
            const double v = curves[s].values[static_cast<std::size_t>(m + grid.ell)];
            svg += format_sig(px(m), 6) + "," + format_sig(py(v), 6) + " ";
        }
        svg += "\"/>\n";
        for (int m = -grid.ell; m <= grid.ell; ++m) {
            const double v = curves[s].values[static_cast<std::size_t>(m + grid.ell)];
            append_marker(svg, static_cast<int>(s), px(m), py(v), color);
        }
    }

    // legend, to the right of the plot
    for (std::size_t s = 0; s < curves.size(); ++s) {
        const double ly = top + 24.0 + 22.0 * static_cast<double>(s);
        append_marker(svg, static_cast<int>(s), right + 18.0, ly - 4.0, kSeriesColors[s % 3]);
        svg += "<text x=\"" + format_sig(right + 30.0, 6) + "\" y=\"" + format_sig(ly, 6) +
               "\" font-family=\"monospace\" font-size=\"12\" fill=\"#222222\">t=" +
               format_sig(curves[s].t, 3) + "</text>\n";
    }
}

std::string fig1_svg(const Fig1Dataset& data) {
    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"650\" "
           "viewBox=\"0 0 720 650\">\n";
    svg += "<rect width=\"720\" height=\"650\" fill=\"#ffffff\"/>\n";
    svg += "<text x=\"360\" y=\"24\" font-family=\"monospace\" font-size=\"14\" "
           "fill=\"#222222\" text-anchor=\"middle\">Option price evolution on the d=21 "
           "exponential grid</text>\n";
    svg += "<text x=\"360\" y=\"42\" font-family=\"monospace\" font-size=\"12\" "
           "fill=\"#555555\" text-anchor=\"middle\">sigma=0.25  r=0.03  K=e^{8 sqrt(kappa)}=" +
           format_sig(data.strike, 6) + "  T=5</text>\n";
    append_panel(svg, data, data.call_curves, "call", 60.0);
    append_panel(svg, data, data.put_curves, "put", 370.0);
    svg += "</svg>\n";
    return svg;
}

void emit_near_strike_report(std::ostream& out, const NearStrikeReport& report,
                             const char* kind) {
    for (const NearStrikeEntry& e : report.entries) {
        out << "near-strike " << kind << " t=" << format_sig(report.t, 6) << ": m=" << e.m
            << " S=" << format_sig(e.spot, 6) << " finite=" << format_sig(e.finite_value, 6)
            << " closed_form=" << format_sig(e.closed_form_value, 6)
            << " rel_dev=" << format_sig(e.relative_deviation, 6) << '\n';
    }
    for (const NearStrikeEntry& e : report.entries) {
        if (!e.warn) continue;
        out << "warning: near-strike deviation " << format_sig(e.relative_deviation, 6)
            << " at m=" << e.m << " (" << kind << ", t=" << format_sig(report.t, 6)
            << ") exceeds " << format_sig(kNearStrikeWarnLevel, 6) << '\n';
    }
}

int run_fig1(const std::string& out_dir, std::ostream& out) {
    namespace fs = std::filesystem;
    const fs::path dir{out_dir.empty() ? std::string{"."} : out_dir};
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create output directory " + dir.string() + ": " +
                                 ec.message());
    }
    const fs::path call_path = dir / "fig1_call.csv";
    const fs::path put_path = dir / "fig1_put.csv";
    const fs::path svg_path = dir / "fig1.svg";
    std::ofstream call_csv{call_path, std::ios::binary};
    std::ofstream put_csv{put_path, std::ios::binary};
    if (!call_csv || !put_csv) {
        throw std::runtime_error("cannot open CSV outputs in " + dir.string());
    }
    const Fig1Dataset data = reproduce_fig1(call_csv, put_csv);
    call_csv.close();
    put_csv.close();
    if (call_csv.fail() || put_csv.fail()) {
        throw std::runtime_error("failed writing CSV outputs in " + dir.string());
    }
    std::ofstream svg{svg_path, std::ios::binary};
    svg << fig1_svg(data);
    svg.close();
    if (svg.fail()) {
        throw std::runtime_error("failed writing " + svg_path.string());
    }
    out << "strike K = " << format_sig(data.strike) << '\n';
    emit_near_strike_report(out, data.call_report, "call");
    emit_near_strike_report(out, data.put_report, "put");
    out << "wrote " << call_path.string() << ", " << put_path.string() << ", "
        << svg_path.string() << '\n';
    return 0;
}

// ---------------------------------------------------------------------------
// validate: the invariant suite
// ---------------------------------------------------------------------------

struct CheckResult {
    bool ok = false;
    std::string detail;
};

CheckResult check_quadrature_nodes() {
    const QuadratureRule rule = gauss_legendre(2, -1.0, 1.0);
    const double ref = 1.0 / std::sqrt(3.0);
    const double dev = std::max(std::abs(rule.nodes[0] + ref), std::abs(rule.nodes[1] - ref));
    return {dev < 1e-15, "order-2 node error " + format_sig(dev, 3)};
}

CheckResult check_quadrature_exactness() {
    const auto f = [](double x) { return std::pow(x, 15); };
    const double got = integrate(f, 0.0, 1.0, 1, 8);
    const double dev = std::abs(got - 1.0 / 16.0);
    return {dev < 1e-14, "degree-15 error " + format_sig(dev, 3)};
}

CheckResult check_gaussian_integral() {
    const double half_sqrt_pi = 0.5 * std::sqrt(std::numbers::pi);
    const double tail = std::abs(gaussian_integral(10.0) - half_sqrt_pi);
    const double odd = std::abs(gaussian_integral(1.3) + gaussian_integral(-1.3));
    const auto gauss = [](double x) { return std::exp(-x * x); };
    const double full = std::abs(integrate(gauss, -10.0, 10.0, 20, 16) - std::sqrt(std::numbers::pi));
    const bool ok = tail < 1e-12 && odd < 1e-15 && full < 1e-10;
    return {ok, "tail " + format_sig(tail, 3) + ", oddness " + format_sig(odd, 3) +
                    ", full-line " + format_sig(full, 3)};
}

CheckResult check_normal_cdf() {
    const double dev = std::abs(norm_cdf(1.0) - 0.8413447460685429);
    const double sym = std::abs(norm_cdf(1.0) + norm_cdf(-1.0) - 1.0);
    return {dev < 1e-9 && sym < 1e-13,
            "Phi(1) error " + format_sig(dev, 3) + ", symmetry " + format_sig(sym, 3)};
}

CheckResult check_parity() {
    double worst = 0.0;
    const double strike = 100.0;
    for (double spot : {60.0, 80.0, 100.0, 120.0, 140.0}) {
        for (double sigma : {0.1, 0.25}) {
            for (double r : {0.0, 0.05}) {
                const MarketParams params = make_market_params(sigma, r);
                const OptionSpec call = make_option_spec(OptionKind::Call, strike, 1.0);
                const OptionSpec put = make_option_spec(OptionKind::Put, strike, 1.0);
                const double lhs =
                    bs_price(spot, 0.0, call, params) - bs_price(spot, 0.0, put, params);
                const double rhs = spot - strike * std::exp(-r);
                worst = std::max(worst, std::abs(lhs - rhs));
            }
        }
    }
    return {worst < 1e-12, "max parity gap " + format_sig(worst, 3) + " over 20 points"};
}

CheckResult check_bs_oracle() {
    const MarketParams atm_params = make_market_params(0.2, 0.0);
    const OptionSpec atm = make_option_spec(OptionKind::Call, 100.0, 1.0);
    const double atm_dev =
        std::abs(bs_price(100.0, 0.0, atm, atm_params) -
                 bs_price_quadrature(100.0, 0.0, atm, atm_params));
    const MarketParams itm_params = make_market_params(0.25, 0.05);
    const OptionSpec itm = make_option_spec(OptionKind::Put, 100.0, 2.0);
    const double itm_dev = std::abs(bs_price(80.0, 0.0, itm, itm_params) -
                                    bs_price_quadrature(80.0, 0.0, itm, itm_params));
    const double worst = std::max(atm_dev, itm_dev);
    return {worst < 1e-5, "closed form vs lognormal quadrature " + format_sig(worst, 3)};
}

CheckResult check_hermite_orthonormality() {
    const int max_n = 12;
    const HermiteBasis basis(max_n);
    const QuadratureRule rule = composite_rule(16, 40, -20.0, 20.0);
    const std::size_t n = static_cast<std::size_t>(max_n) + 1;
    std::vector<double> gram(n * n, 0.0);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const std::vector<double> values = basis.psi_all(rule.nodes[i]);
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a; b < n; ++b) {
                gram[a * n + b] += rule.weights[i] * values[a] * values[b];
            }
        }
    }
    double worst = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a; b < n; ++b) {
            worst = std::max(worst, std::abs(gram[a * n + b] - (a == b ? 1.0 : 0.0)));
        }
    }
    return {worst < 1e-8, "Gram deviation " + format_sig(worst, 3) + " for n <= 12"};
}

CheckResult check_hermite_bound() {
    HermiteBasis basis(256);
    double peak = 0.0;
    for (int n : {0, 1, 2, 3, 5, 10, 50, 128, 256}) {
        for (int i = 0; i <= 6000; ++i) {
            const double x = -30.0 + 0.01 * static_cast<double>(i);
            peak = std::max(peak, std::abs(basis.psi(n, x)));
        }
    }
    return {peak < 0.8, "max |Psi_n| sampled = " + format_sig(peak, 6)};
}

CheckResult check_hermite_residual() {
    HermiteBasis basis(10);
    double worst = 0.0;
    for (int n = 0; n <= 10; ++n) {
        for (int i = 0; i <= 16; ++i) {
            const double x = -4.0 + 0.5 * static_cast<double>(i);
            worst = std::max(worst, std::abs(basis.oscillator_residual(n, x, 1e-4)));
        }
    }
    return {worst < 1e-5, "max FD eigen-residual " + format_sig(worst, 3)};
}

CheckResult check_susy_gram() {
    const SusyBasis basis(make_susy_params(1.5), 6);
    const QuadratureRule rule = composite_rule(16, 48, -12.0, 12.0);
    const std::size_t n = 7;
    std::vector<double> gram(n * n, 0.0);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const std::vector<double> values = basis.phi_all(rule.nodes[i]);
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a; b < n; ++b) {
                gram[a * n + b] += rule.weights[i] * values[a] * values[b];
            }
        }
    }
    double worst = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a; b < n; ++b) {
            worst = std::max(worst, std::abs(gram[a * n + b] - (a == b ? 1.0 : 0.0)));
        }
    }
    return {worst < 1e-6, "Gram deviation " + format_sig(worst, 3) + " at alpha=1.5"};
}

CheckResult check_susy_norms() {
    const double alpha = 1.5;
    const SusyBasis basis(make_susy_params(alpha), 8);
    const double ground_ref =
        alpha * std::sqrt(std::sqrt(std::numbers::pi) /
                          (alpha * alpha - 0.25 * std::numbers::pi));
    double worst = std::abs(basis.norms()[0] - ground_ref);
    for (int n = 1; n <= 8; ++n) {
        worst = std::max(worst, std::abs(basis.norms()[static_cast<std::size_t>(n)] -
                                         std::sqrt(static_cast<double>(n))));
    }
    return {worst < 1e-6, "ladder norm deviation " + format_sig(worst, 3)};
}

CheckResult check_susy_residual() {
    const SusyParams params = make_susy_params(1.5);
    const SusyBasis basis(params, 4);
    const double h = 1e-4;
    double worst = 0.0;
    for (int n = 0; n <= 4; ++n) {
        for (double x : {-2.0, -0.5, 0.3, 1.1, 2.4}) {
            const double second =
                (basis.phi(n, x + h) - 2.0 * basis.phi(n, x) + basis.phi(n, x - h)) / (h * h);
            const double residual = -0.5 * second +
                                    (u_alpha(params, x) - (n + 0.5)) * basis.phi(n, x);
            worst = std::max(worst, std::abs(residual));
        }
    }
    return {worst < 1e-4, "max FD partner residual " + format_sig(worst, 3)};
}

CheckResult check_spectral_delta() {
    const PricingBasis basis = PricingBasis::oscillator(5);
    HermiteBasis hermite(0);
    // weight e^{gamma x} with gamma = -1 cancels the S factor, leaving the
    // plain orthonormality integral
    const auto payoff = [&hermite](double S) { return S * hermite.psi(0, std::log(S)); };
    const std::vector<double> coeffs =
        project_payoff(payoff, basis, -1.0, -8.0, 8.0, 6, 64, 16);
    double worst = std::abs(coeffs[0] - 1.0);
    for (std::size_t n = 1; n < coeffs.size(); ++n) worst = std::max(worst, std::abs(coeffs[n]));
    return {worst < 1e-8, "delta-projection deviation " + format_sig(worst, 3)};
}

CheckResult check_spectral_monotone() {
    const MarketParams params = make_market_params(0.25, 0.03);
    const OptionSpec spec = make_option_spec(OptionKind::Call, 1.0, 1.0);
    const LogDomain domain = default_domain(1.0);
    std::vector<double> residuals;
    for (int n_terms : {8, 16, 32}) {
        const SpectralSolution solution = build_solution(
            spec, params, PricingBasis::oscillator(n_terms - 1), domain, n_terms);
        residuals.push_back(terminal_residual(solution, spec, domain, 50));
    }
    const bool ok = residuals[0] > residuals[1] && residuals[1] > residuals[2];
    return {ok, "terminal residuals " + format_sig(residuals[0], 4) + " > " +
                    format_sig(residuals[1], 4) + " > " + format_sig(residuals[2], 4)};
}

CheckResult check_spectral_damping() {
    const MarketParams params = make_market_params(0.25, 0.03);
    const OptionSpec spec = make_option_spec(OptionKind::Call, 1.0, 1.0);
    const LogDomain domain = default_domain(1.0);
    const SpectralSolution solution =
        build_solution(spec, params, PricingBasis::oscillator(15), domain, 16);
    const double x = std::log(1.3);
    bool ok = true;
    double margin = 1e300;
    for (std::size_t n = 0; n < solution.coefficients.size(); ++n) {
        const double base = std::abs(solution.coefficients[n] * solution.basis.eval(static_cast<int>(n), x));
        const double early = base * std::exp(solution.epsilons[n] * (0.25 - 1.0));
        const double late = base * std::exp(solution.epsilons[n] * (0.75 - 1.0));
        if (early > late) ok = false;
        if (base > 0.0) margin = std::min(margin, late - early);
    }
    return {ok, "term-wise damping monotone in t"};
}

CheckResult check_finite_grid() {
    const FiniteGrid g3 = build_grid(3);
    const double step3 = std::sqrt(2.0 * std::numbers::pi / 3.0);
    double dev = std::abs(g3.points[0] + step3) + std::abs(g3.points[1]) +
                 std::abs(g3.points[2] - step3);
    const FiniteGrid g21 = build_grid(21);
    dev = std::max(dev, std::abs(g21.points[20] - 10.0 * std::sqrt(2.0 * std::numbers::pi / 21.0)));
    bool rejected = false;
    try {
        build_grid(4);
    } catch (const DomainError&) {
        rejected = true;
    }
    return {dev < 1e-12 && rejected, "grid layout error " + format_sig(dev, 3) +
                                         (rejected ? ", even d rejected" : ", even d accepted")};
}

CheckResult check_operator_identity() {
    const FiniteGrid grid = build_grid(9);
    const Matrix h = build_hamiltonian(grid);
    double worst = 0.0;
    for (std::size_t j = 0; j < 9; ++j) {
        CVec ej(9, {0.0, 0.0});
        ej[j] = 1.0;
        const CVec d2 = finite_d2(grid, ej);
        const CVec fd2f = finite_fourier(finite_d2(grid, finite_fourier_adjoint(ej)));
        for (std::size_t i = 0; i < 9; ++i) {
            const std::complex<double> combined = -0.5 * (d2[i] + fd2f[i]);
            worst = std::max(worst, std::abs(combined - std::complex<double>{h(i, j), 0.0}));
        }
    }
    return {worst < 1e-12, "max |H + (D2 + F D2 F^+)/2| entry " + format_sig(worst, 3)};
}

CheckResult check_fourier_roundtrip() {
    CVec v(9);
    for (std::size_t i = 0; i < 9; ++i) {
        v[i] = {std::cos(1.7 * static_cast<double>(i)), std::sin(0.9 * static_cast<double>(i))};
    }
    const CVec round = finite_fourier_adjoint(finite_fourier(v));
    double worst = 0.0;
    for (std::size_t i = 0; i < 9; ++i) worst = std::max(worst, std::abs(round[i] - v[i]));
    return {worst < 1e-12, "round-trip error " + format_sig(worst, 3)};
}

CheckResult check_commutator() {
    const FiniteGrid grid = build_grid(9);
    const Matrix h = build_hamiltonian(grid);
    double worst = 0.0;
    for (std::size_t j = 0; j < 9; ++j) {
        CVec hj(9), ej(9, {0.0, 0.0});
        for (std::size_t i = 0; i < 9; ++i) hj[i] = h(i, j);
        ej[j] = 1.0;
        const CVec fh = finite_fourier(hj);
        const CVec fj = finite_fourier(ej);
        for (std::size_t i = 0; i < 9; ++i) {
            std::complex<double> hf{0.0, 0.0};
            for (std::size_t k = 0; k < 9; ++k) hf += h(i, k) * fj[k];
            worst = std::max(worst, std::abs(fh[i] - hf));
        }
    }
    return {worst < 1e-10, "max |FH - HF| entry " + format_sig(worst, 3)};
}

CheckResult check_harper_residual() {
    const FiniteOscillator osc = diagonalize(21);
    double worst = 0.0;
    for (std::size_t m = 0; m < 21; ++m) {
        for (std::size_t i = 0; i < 21; ++i) {
            double hv = 0.0;
            for (std::size_t k = 0; k < 21; ++k) hv += osc.hamiltonian(i, k) * osc.harpers(k, m);
            worst = std::max(worst, std::abs(hv - osc.eigenvalues[m] * osc.harpers(i, m)));
        }
    }
    return {worst < 1e-10, "max eigen-residual " + format_sig(worst, 3)};
}

CheckResult check_harper_fourier() {
    const FiniteOscillator osc = diagonalize(21);
    double worst = 0.0;
    const std::complex<double> minus_i{0.0, -1.0};
    for (std::size_t m = 0; m < 21; ++m) {
        CVec v(21);
        for (std::size_t i = 0; i < 21; ++i) v[i] = osc.harpers(i, m);
        const CVec fv = finite_fourier(v);
        std::complex<double> phase{1.0, 0.0};
        for (std::size_t f = 0; f < m % 4; ++f) phase *= minus_i;
        for (std::size_t i = 0; i < 21; ++i) {
            worst = std::max(worst, std::abs(fv[i] - phase * v[i]));
        }
    }
    return {worst < 1e-8, "max |F h_m - (-i)^m h_m| " + format_sig(worst, 3)};
}

CheckResult check_harper_alternations() {
    const FiniteOscillator osc = diagonalize(21);
    for (std::size_t m = 0; m < 21; ++m) {
        if (osc.alternations[m] != static_cast<int>(m)) {
            return {false, "mode " + std::to_string(m) + " has " +
                               std::to_string(osc.alternations[m]) + " sign changes"};
        }
    }
    return {true, "sign-change count equals mode number for d=21"};
}

CheckResult check_finite_terminal() {
    const MarketParams params = make_market_params(0.25, 0.03);
    double worst = 0.0;
    for (int d : {5, 9, 21}) {
        const FiniteOscillator osc = diagonalize(d);
        const int ell = osc.grid.ell;
        for (int k = -ell; k <= ell; ++k) {
            const DiscreteMarket market = make_discrete_market(osc, params, k, 5.0);
            for (OptionKind kind : {OptionKind::Call, OptionKind::Put}) {
                const std::vector<double> payoff = discrete_payoff(market, kind);
                const std::vector<double> coeffs = finite_coefficients(market, payoff);
                const PriceCurve curve = price_curve(market, coeffs, market.maturity);
                for (std::size_t i = 0; i < payoff.size(); ++i) {
                    worst = std::max(worst, std::abs(curve.values[i] - payoff[i]));
                }
            }
        }
    }
    return {worst < 1e-9, "max terminal reconstruction error " + format_sig(worst, 3)};
}

CheckResult check_finite_damping() {
    const DiscreteMarket market =
        make_discrete_market(diagonalize(21), make_market_params(0.25, 0.03), 8, 5.0);
    bool ok = true;
    for (double eps : market.epsilons) {
        const double early = std::exp(eps * (3.0 - market.maturity));
        const double late = std::exp(eps * (4.0 - market.maturity));
        if (!(eps > 0.0) || early > late || late > 1.0) ok = false;
    }
    return {ok, "per-mode damping factors monotone and <= 1"};
}

CheckResult check_fig1_determinism() {
    std::ostringstream call_1, put_1, call_2, put_2;
    reproduce_fig1(call_1, put_1);
    reproduce_fig1(call_2, put_2);
    const bool ok = call_1.str() == call_2.str() && put_1.str() == put_2.str();
    return {ok, ok ? "two runs byte-identical" : "runs differ"};
}

CheckResult check_near_strike_report() {
    const DiscreteMarket market =
        make_discrete_market(diagonalize(21), make_market_params(0.25, 0.03), 8, 5.0);
    const std::vector<double> coeffs =
        finite_coefficients(market, discrete_payoff(market, OptionKind::Call));
    const NearStrikeReport report = near_strike_report(market, coeffs, OptionKind::Call, 4.0);
    if (report.entries.size() != 3) return {false, "expected 3 entries"};
    for (const NearStrikeEntry& e : report.entries) {
        if (!std::isfinite(e.relative_deviation)) return {false, "non-finite deviation"};
        if (e.warn != (e.relative_deviation > kNearStrikeWarnLevel)) {
            return {false, "warn flag inconsistent with the 0.25 ceiling"};
        }
    }
    return {true, "3 entries, flags consistent with the 0.25 ceiling"};
}

int run_validate(std::ostream& out) {
    using Check = std::pair<const char*, CheckResult (*)()>;
    const Check checks[] = {
        {"quadrature-gauss-nodes", check_quadrature_nodes},
        {"quadrature-polynomial-exactness", check_quadrature_exactness},
        {"gaussian-integral", check_gaussian_integral},
        {"normal-cdf", check_normal_cdf},
        {"closed-form-parity", check_parity},
        {"closed-form-vs-quadrature", check_bs_oracle},
        {"hermite-orthonormality", check_hermite_orthonormality},
        {"hermite-amplitude-bound", check_hermite_bound},
        {"hermite-eigen-residual", check_hermite_residual},
        {"susy-gram", check_susy_gram},
        {"susy-ladder-norms", check_susy_norms},
        {"susy-eigen-residual", check_susy_residual},
        {"spectral-delta-projection", check_spectral_delta},
        {"spectral-terminal-monotone", check_spectral_monotone},
        {"spectral-damping-dominance", check_spectral_damping},
        {"finite-grid-shape", check_finite_grid},
        {"finite-operator-identity", check_operator_identity},
        {"finite-fourier-roundtrip", check_fourier_roundtrip},
        {"finite-commutator", check_commutator},
        {"harper-eigen-residual", check_harper_residual},
        {"harper-fourier-classes", check_harper_fourier},
        {"harper-alternations", check_harper_alternations},
        {"finite-terminal-exactness", check_finite_terminal},
        {"finite-damping-dominance", check_finite_damping},
        {"fig1-determinism", check_fig1_determinism},
        {"near-strike-report", check_near_strike_report},
    };
    int failures = 0;
    for (const Check& check : checks) {
        CheckResult result;
        try {
            result = check.second();
        } catch (const std::exception& e) {
            result = {false, std::string{"exception: "} + e.what()};
        }
        out << (result.ok ? "pass: " : "FAIL: ") << check.first;
        if (!result.detail.empty()) out << " (" << result.detail << ")";
        out << '\n';
        if (!result.ok) ++failures;
    }
    if (failures == 0) {
        out << "all " << std::size(checks) << " properties hold\n";
    } else {
        out << failures << " of " << std::size(checks) << " properties failed\n";
    }
    return failures;
}

} // namespace

// ---------------------------------------------------------------------------
// public surface
// ---------------------------------------------------------------------------

RunConfig parse_config(const std::string& text) {
    std::vector<std::pair<std::string, std::string>> pairs;
    std::istringstream lines{text};
    std::string line;
    while (std::getline(lines, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        if (stripped.front() == '[' && stripped.back() == ']') continue; // section header
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("malformed line (expected key=value): '" + stripped + "'");
        }
        const std::string key = trim(std::string_view{stripped}.substr(0, eq));
        const std::string value = trim(std::string_view{stripped}.substr(eq + 1));
        if (key.empty()) throw ConfigError("malformed line (empty key): '" + stripped + "'");
        pairs.emplace_back(key, value);
    }

    RawConfig raw;
    // the preset forms the base layer; explicit keys override it wherever
    // they appear in the document
    for (const auto& [key, value] : pairs) {
        if (key != "preset") continue;
        if (value != "fig1") throw ConfigError("unknown preset: '" + value + "'");
        apply_fig1_preset(raw);
    }
    for (const auto& [key, value] : pairs) {
        if (key == "preset") continue;
        apply_key(raw, key, value);
    }

    if (!raw.sigma) throw ConfigError("missing field: sigma");
    if (!raw.r) throw ConfigError("missing field: r");
    if (!raw.maturity) throw ConfigError("missing field: T");

    RunConfig config;
    config.sigma = *raw.sigma;
    config.r = *raw.r;
    config.maturity = *raw.maturity;
    make_market_params(config.sigma, config.r); // range validation
    if (!(config.maturity > 0.0)) throw ConfigError("T must be positive");
    config.model = raw.model.value_or(ModelKind::Bs);
    config.kind = raw.kind.value_or(OptionKind::Call);
    config.d = raw.d.value_or(21);
    if (config.d % 2 == 0) throw ConfigError("d must be odd");
    if (config.d < 3) throw ConfigError("d must be at least 3");
    config.truncation = raw.truncation.value_or(48);
    if (config.truncation < 1) throw ConfigError("N must be positive");
    config.alpha = raw.alpha;
    config.strike = raw.strike;
    config.strike_index = raw.strike_index;
    config.domain_a = raw.a;
    config.domain_b = raw.b;
    config.times = raw.times.value_or(std::vector<double>{0.0});
    for (double t : config.times) {
        if (!(t <= config.maturity)) {
            throw ConfigError("eval time " + format_sig(t, 6) + " exceeds maturity T=" +
                              format_sig(config.maturity, 6));
        }
    }

    if (config.model == ModelKind::Finite) {
        if (!config.strike_index) throw ConfigError("model=finite requires strike_index");
        const int ell = (config.d - 1) / 2;
        if (*config.strike_index < -ell || *config.strike_index > ell) {
            throw ConfigError("strike_index must lie in [-" + std::to_string(ell) + ", " +
                              std::to_string(ell) + "]");
        }
        return config;
    }

    if (!config.strike) throw ConfigError("missing field: strike");
    if (!(*config.strike > 0.0)) throw ConfigError("strike must be positive");
    if (config.model == ModelKind::Susy) {
        if (!config.alpha) throw ConfigError("model=susy requires alpha");
        make_susy_params(*config.alpha); // throws with the admissibility bound
    }
    if (!config.domain_a) config.domain_a = *config.strike * std::exp(-6.0);
    if (!config.domain_b) config.domain_b = *config.strike * std::exp(6.0);
    make_log_domain(*config.domain_a, *config.domain_b);
    if (!(*config.domain_a < *config.strike && *config.strike < *config.domain_b)) {
        throw ConfigError("strike must lie strictly inside the band (a, b)");
    }
    config.spots = raw.spots.value_or(std::vector<double>{*config.strike});
    return config;
}

int run_command(const RunConfig& config, Command command, const std::string& out_dir,
                std::ostream& out, std::ostream& err) {
    (void)err; // reserved for the caller's error formatting
    switch (command) {
        case Command::Price:
            return run_price(config, out);
        case Command::ReproduceFig1:
            return run_fig1(out_dir, out);
        case Command::DumpBasis:
            return run_dump_basis(config, out);
        case Command::Compare:
            return run_compare(config, out);
        case Command::Validate:
            return run_validate(out);
    }
    throw DomainError("unhandled command");
}

int pricer_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectral and finite-grid option pricing engine", "pricer"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    struct Overrides {
        std::optional<std::string> model;
        std::optional<double> sigma, r, strike, maturity;
    } overrides;

    struct SubEntry {
        CLI::App* sub;
        Command command;
    };
    std::vector<SubEntry> entries;
    const auto add_sub = [&](const char* name, const char* description, Command command,
                             bool config_required) {
        CLI::App* sub = app.add_subcommand(name, description);
        CLI::Option* config_opt =
            sub->add_option("--config", config_path, "path to a key=value config file");
        if (config_required) config_opt->required();
        sub->add_option("--out", out_dir, "output directory (created if absent)");
        sub->add_option_function<std::string>(
            "--model", [&](const std::string& v) { overrides.model = v; },
            "override the configured model (bs|oscillator|susy|finite)");
        sub->add_option_function<double>(
            "--sigma", [&](double v) { overrides.sigma = v; }, "override volatility");
        sub->add_option_function<double>(
            "--r", [&](double v) { overrides.r = v; }, "override the risk-free rate");
        sub->add_option_function<double>(
            "--strike", [&](double v) { overrides.strike = v; }, "override the strike");
        sub->add_option_function<double>(
            "--T", [&](double v) { overrides.maturity = v; }, "override the maturity");
        entries.push_back({sub, command});
    };
    add_sub("price", "price the configured contract", Command::Price, true);
    add_sub("reproduce-fig1", "emit the canonical d=21 price-evolution chart",
            Command::ReproduceFig1, false);
    add_sub("dump-basis", "sample the expansion basis to CSV", Command::DumpBasis, true);
    add_sub("compare", "cross-model price comparison near the strike", Command::Compare, true);
    add_sub("validate", "run the invariant suite", Command::Validate, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << '\n';
        return 1;
    }

    try {
        Command command{};
        for (const SubEntry& entry : entries) {
            if (entry.sub->parsed()) command = entry.command;
        }
        std::string text;
        if (!config_path.empty()) {
            std::ifstream file{config_path};
            if (!file) throw ConfigError("cannot read config file: " + config_path);
            std::ostringstream content;
            content << file.rdbuf();
            text = content.str();
        } else {
            text = "preset=fig1";
        }
        // overrides append as trailing key=value lines; later keys win
        if (overrides.model) text += "\nmodel=" + *overrides.model;
        if (overrides.sigma) text += "\nsigma=" + format_sig(*overrides.sigma, 17);
        if (overrides.r) text += "\nr=" + format_sig(*overrides.r, 17);
        if (overrides.strike) text += "\nstrike=" + format_sig(*overrides.strike, 17);
        if (overrides.maturity) text += "\nT=" + format_sig(*overrides.maturity, 17);
        const RunConfig config = parse_config(text);
        return run_command(config, command, out_dir, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace qosc
