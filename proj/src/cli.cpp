#include <trigger/cli.hpp>
#include <trigger/config.hpp>
#include <trigger/errors.hpp>
#include <trigger/validation.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <variant>

namespace trigger::cli {

namespace {

using Cell = std::variant<std::string, double, std::int64_t>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

// 12 significant digits, locale independent.
std::string format_number(double x) {
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, x, std::chars_format::general, 12);
    return std::string(buffer, ptr);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string quoted = "\"";
    for (char c : s)
        quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
    return quoted + "\"";
}

std::string cell_text(const Cell& cell) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::string>)
                return csv_field(v);
            else if constexpr (std::is_same_v<T, double>)
                return format_number(v);
            else
                return std::to_string(v);
        },
        cell);
}

std::string render_csv(const Table& table) {
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        out += (i ? "," : "") + csv_field(table.columns[i]);
    out += "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out += (i ? "," : "") + cell_text(row[i]);
        out += "\n";
    }
    return out;
}

std::string render_json(const Table& table) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json obj;
        for (std::size_t i = 0; i < row.size(); ++i)
            std::visit(
                [&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, double>) {
                        if (std::isfinite(v))
                            obj[table.columns[i]] = v;
                        else
                            obj[table.columns[i]] = format_number(v);
                    } else {
                        obj[table.columns[i]] = v;
                    }
                },
                row[i]);
        rows.push_back(std::move(obj));
    }
    return rows.dump(2) + "\n";
}

std::int64_t as_int(std::size_t v) { return static_cast<std::int64_t>(v); }

template <class T>
const T& need(const std::optional<T>& value, const char* section) {
    if (!value)
        throw ValidationError(section, "*", "section is required by this command");
    return *value;
}

double query_time(const RunConfig& config) {
    if (!config.query_time)
        throw ValidationError("query", "t", "missing required key");
    return *config.query_time;
}

Table cmd_survival(const RunConfig& config) {
    const double t = query_time(config);
    const double s = survival(need(config.chain, "chain"), need(config.hazard, "hazard"), config.initial_state, t);
    return {{"t", "survival"}, {{t, s}}};
}

Table cmd_price(const RunConfig& config) {
    const auto& chain = need(config.chain, "chain");
    const auto& hazard = need(config.hazard, "hazard");
    const auto& claim = need(config.claim, "claim");
    const auto i0 = config.initial_state;
    const double maturity = config.claim_maturity;
    return {{"block", "price"},
            {{std::string("terminal"), price_terminal(chain, hazard, claim, i0, maturity)},
             {std::string("stream"), price_stream(chain, hazard, claim, i0, maturity)},
             {std::string("recovery"), price_recovery(chain, hazard, claim, i0, maturity)}}};
}

Table cmd_mgf(const RunConfig& config) {
    const auto& chain = need(config.chain, "chain");
    if (!config.query_weights)
        throw ValidationError("query", "u", "missing required key");
    const Vector psi = mgf(chain, *config.query_weights, query_time(config), config.mgf_method);
    Table table{{"state", "mgf"}, {}};
    for (Eigen::Index i = 0; i < psi.size(); ++i)
        table.rows.push_back({as_int(static_cast<std::size_t>(i) + 1), psi[i]});
    return table;
}

Table cmd_two_firm(const RunConfig& config) {
    const auto& params = need(config.two_firm, "two_firm");
    Table table{{"t", "density_A", "density_B", "survival_A", "survival_B", "first_default_survival", "bond_A",
                 "bond_B"},
                {}};
    for (double t : config.time_grid) {
        const double discount = std::exp(-params.rate() * t);
        const double sa = marginal_survival(params, Firm::A, t);
        const double sb = marginal_survival(params, Firm::B, t);
        table.rows.push_back({t, marginal_density(params, Firm::A, t), marginal_density(params, Firm::B, t), sa, sb,
                              first_default_survival(params, t), discount * sa, discount * sb});
    }
    return table;
}

Table cmd_basket(const RunConfig& config, std::ostream& err) {
    const auto& contract = need(config.contract, "contract");
    const auto cdf = kth_default_cdf(contract, contract.maturity());
    if (cdf.precision_warning)
        err << "warning: rounding bound " << format_number(cdf.error_bound) << " exceeds 1e-6 of the probability\n";
    const double s = std::exp(-contract.rate() * contract.maturity()) * cdf.probability;
    return {{"k", "b", "c", "premium"}, {{as_int(contract.seniority()), contract.contagion(), contract.shape(), s}}};
}

Table cmd_sweep(const RunConfig& config, std::ostream& err) {
    const auto& contract = need(config.contract, "contract");
    if (config.contagion_grid.empty() || config.shape_grid.empty())
        throw ValidationError("sweep", "*", "section is required by this command");
    const auto result = sweep(contract, config.contagion_grid, config.shape_grid, config.mc.workers);
    for (const auto& w : result.warnings)
        err << "warning: " << w << "\n";
    Table table{{"k", "b", "c", "premium"}, {}};
    for (const auto& row : result.rows)
        table.rows.push_back({as_int(row.k), row.contagion, row.shape, row.premium});
    return table;
}

Table cmd_simulate(const RunConfig& config) {
    Table table{{"quantity", "mean", "std_error", "paths", "seed"}, {}};
    for (const auto& e : simulate_estimates(config))
        table.rows.push_back(
            {e.item, e.mc.mean, e.mc.std_error, as_int(e.mc.paths), static_cast<std::int64_t>(e.mc.seed)});
    return table;
}

Table cmd_validate(const RunConfig& config, bool& all_passed) {
    Table table{{"item", "analytic", "mc_mean", "mc_std_error", "z", "status"}, {}};
    all_passed = true;
    for (const auto& line : validate(config)) {
        all_passed = all_passed && line.passed;
        table.rows.push_back({line.item, line.analytic, line.mc.mean, line.tolerance_se, line.z,
                              std::string(line.passed ? "PASS" : "FAIL")});
    }
    return table;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Trigger-event reduced-form credit model: pricing, simulation and validation", "trigger"};
    std::string command;
    std::string config_path;
    std::string output_path;
    std::string format;
    std::uint64_t seed = 0;
    std::size_t paths = 0;
    unsigned workers = 0;

    app.add_option("command", command, "survival | price | two-firm | basket | sweep | mgf | simulate | validate")
        ->required()
        ->check(CLI::IsMember(
            {"survival", "price", "two-firm", "basket", "sweep", "mgf", "simulate", "validate"}));
    app.add_option("--config", config_path, "Config file")->required();
    app.add_option("--output", output_path, "Write data here instead of stdout");
    app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    auto* seed_opt = app.add_option("--seed", seed, "Monte Carlo seed (overrides config)");
    auto* paths_opt = app.add_option("--paths", paths, "Monte Carlo path count (overrides config)");
    auto* workers_opt = app.add_option("--workers", workers, "Worker threads (results do not depend on it)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return kFailure;
    }

    try {
        ConfigFile file = ConfigFile::load(config_path);
        if (*seed_opt)
            file.set("mc", "seed", std::to_string(seed));
        if (*paths_opt)
            file.set("mc", "paths", std::to_string(paths));
        if (*workers_opt)
            file.set("mc", "workers", std::to_string(workers));
        const RunConfig config = build_run_config(file);
        const OutputFormat output_format =
            format.empty() ? config.format : (format == "json" ? OutputFormat::Json : OutputFormat::Csv);
        const std::string destination = output_path.empty() ? config.output_path : output_path;

        if (command == "simulate" || command == "validate")
            err << "seed: " << config.mc.seed << " paths: " << config.mc.paths << "\n";

        bool all_passed = true;
        Table table;
        if (command == "survival")
            table = cmd_survival(config);
        else if (command == "price")
            table = cmd_price(config);
        else if (command == "mgf")
            table = cmd_mgf(config);
        else if (command == "two-firm")
            table = cmd_two_firm(config);
        else if (command == "basket")
            table = cmd_basket(config, err);
        else if (command == "sweep")
            table = cmd_sweep(config, err);
        else if (command == "simulate")
            table = cmd_simulate(config);
        else
            table = cmd_validate(config, all_passed);

        const std::string data = output_format == OutputFormat::Json ? render_json(table) : render_csv(table);
        if (destination.empty() || destination == "-") {
            out << data;
        } else {
            std::ofstream file_out(destination, std::ios::binary);
            if (!file_out)
                throw ValidationError("output", "path", "cannot write '" + destination + "'");
            file_out << data;
        }
        if (!all_passed) {
            err << "validation failed: at least one line exceeds " << kAgreementSigmas << " standard errors\n";
            return kValidationFailed;
        }
        return kSuccess;
    } catch (const ValidationError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const DegenerateParameterError& e) {
        err << "degenerate parameters: " << e.what() << "\n";
        return kDegenerate;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kFailure;
    }
}

} // namespace trigger::cli
