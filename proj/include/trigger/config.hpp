#pragma once

#include <trigger/basket.hpp>
#include <trigger/chain.hpp>
#include <trigger/montecarlo.hpp>
#include <trigger/occupation.hpp>
#include <trigger/single_name.hpp>
#include <trigger/two_firm.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace trigger {

/*! Raw sectioned config: `[section]` headers followed by `key = value` lines.

    A dotted key (`chain.M = 4`) names its section explicitly. Values are
    numbers, bracketed comma lists (`[0.1, 0.2]`), or for matrices one bracketed
    row per line, continuation lines being indented. `#` starts a comment.
    Numbers may be written as fractions (`1/3`). Grids also accept
    `start:step:stop`.
*/
class ConfigFile {
public:
    static ConfigFile parse(const std::string& text);
    static ConfigFile load(const std::string& path);

    bool has_section(const std::string& section) const;
    bool has(const std::string& section, const std::string& key) const;
    //! Section names in file order.
    std::vector<std::string> sections() const;

    double number(const std::string& section, const std::string& key) const;
    double number_or(const std::string& section, const std::string& key, double fallback) const;
    std::size_t integer(const std::string& section, const std::string& key) const;
    std::string text(const std::string& section, const std::string& key) const;
    //! A list, or a scalar broadcast to `size` entries when size > 0.
    Vector vector(const std::string& section, const std::string& key, std::size_t size = 0) const;
    Matrix matrix(const std::string& section, const std::string& key) const;
    std::vector<double> grid(const std::string& section, const std::string& key) const;

    void set(const std::string& section, const std::string& key, const std::string& value);

private:
    const std::string& raw(const std::string& section, const std::string& key) const;

    std::map<std::string, std::map<std::string, std::string>> values_;
    std::vector<std::string> order_;
};

enum class OutputFormat { Csv, Json };

//! Fully validated run configuration. Optional parts are present when their section is.
struct RunConfig {
    std::optional<ChainSpec> chain;
    std::size_t initial_state = 0;
    std::optional<HazardSpec> hazard;
    std::optional<ClaimSpec> claim;
    double claim_maturity = 0.0;
    std::optional<double> query_time;
    std::optional<Vector> query_weights;
    MgfMethod mgf_method = MgfMethod::MatrixExponential;
    std::optional<BasketContract> contract;
    std::vector<double> contagion_grid;
    std::vector<double> shape_grid;
    std::optional<TwoFirmParams> two_firm;
    std::vector<double> time_grid;
    MCConfig mc;
    OutputFormat format = OutputFormat::Csv;
    std::string output_path;
};

//! Validates every section against its owning module. Throws ValidationError.
RunConfig build_run_config(const ConfigFile& file);

} // namespace trigger
