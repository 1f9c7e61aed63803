#include <trigger/config.hpp>
#include <trigger/errors.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace trigger {

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"chain", {"M", "states", "exit_rates", "transitions", "initial"}},
        {"hazard", {"lambda", "p", "c"}},
        {"claim", {"r", "terminal", "stream", "recovery", "T"}},
        {"query", {"t", "u", "method"}},
        {"contract", {"n", "b", "c", "r", "T", "k"}},
        {"sweep", {"b_grid", "c_grid"}},
        {"two_firm", {"a1", "a2", "b1", "b2", "p", "r", "T", "t_grid"}},
        {"mc", {"paths", "seed", "horizon", "workers"}},
        {"output", {"format", "path"}},
    };
    return keys;
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

bool parse_plain(std::string_view s, double& out) {
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    if (begin != end && *begin == '+')
        ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end && std::isfinite(out);
}

// Plain decimal or a fraction a/b.
bool parse_number(const std::string& token, double& out) {
    const std::string s = trim(token);
    if (s.empty())
        return false;
    if (const auto slash = s.find('/'); slash != std::string::npos) {
        double num = 0.0, den = 0.0;
        if (!parse_plain(trim(std::string_view(s).substr(0, slash)), num) ||
            !parse_plain(trim(std::string_view(s).substr(slash + 1)), den) || den == 0.0)
            return false;
        out = num / den;
        return true;
    }
    return parse_plain(s, out);
}

std::vector<double> parse_list(const std::string& body, const std::string& section, const std::string& key) {
    std::vector<double> out;
    if (trim(body).empty())
        return out;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        double x = 0.0;
        if (!parse_number(item, x))
            throw ValidationError(section, key, "cannot parse number '" + trim(item) + "'");
        out.push_back(x);
    }
    return out;
}

// Bracketed groups at the top level of a value, e.g. "[1, 2]\n[3, 4]".
std::vector<std::string> bracket_groups(const std::string& value, const std::string& section,
                                        const std::string& key) {
    std::vector<std::string> groups;
    std::size_t pos = 0;
    while (true) {
        pos = value.find_first_not_of(" \t\r\n,", pos);
        if (pos == std::string::npos)
            break;
        if (value[pos] != '[')
            throw ValidationError(section, key, "expected '[' in list value");
        const auto close = value.find(']', pos);
        if (close == std::string::npos)
            throw ValidationError(section, key, "unterminated '['");
        groups.push_back(value.substr(pos + 1, close - pos - 1));
        pos = close + 1;
    }
    return groups;
}

} // namespace

ConfigFile ConfigFile::parse(const std::string& text) {
    ConfigFile file;
    std::istringstream in(text);
    std::string line;
    std::string section;
    std::string last_section, last_key;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const std::string content = trim(line);
        if (content.empty())
            continue;
        const std::string where = "line " + std::to_string(line_number);

        const bool indented = line[0] == ' ' || line[0] == '\t';
        if (indented && !last_key.empty() && content.find('=') == std::string::npos) {
            file.values_[last_section][last_key] += "\n" + content;
            continue;
        }
        if (content.front() == '[' && content.back() == ']' && content.find(',') == std::string::npos &&
            content.find('=') == std::string::npos) {
            section = trim(std::string_view(content).substr(1, content.size() - 2));
            if (!schema().contains(section))
                throw ValidationError(section, "*", "unknown section (" + where + ")");
            if (!file.values_.contains(section))
                file.order_.push_back(section);
            file.values_[section];
            last_key.clear();
            continue;
        }
        const auto eq = content.find('=');
        if (eq == std::string::npos)
            throw ValidationError(section.empty() ? "config" : section, "*", "expected 'key = value' (" + where + ")");
        std::string key = trim(std::string_view(content).substr(0, eq));
        std::string target = section;
        if (const auto dot = key.find('.'); dot != std::string::npos) {
            target = key.substr(0, dot);
            key = key.substr(dot + 1);
        }
        if (target.empty())
            throw ValidationError("config", key, "key outside of any section (" + where + ")");
        const auto known = schema().find(target);
        if (known == schema().end())
            throw ValidationError(target, key, "unknown section (" + where + ")");
        if (!known->second.contains(key))
            throw ValidationError(target, key, "unknown key (" + where + ")");
        if (file.has(target, key))
            throw ValidationError(target, key, "duplicate key (" + where + ")");
        if (!file.values_.contains(target))
            file.order_.push_back(target);
        file.values_[target][key] = trim(std::string_view(content).substr(eq + 1));
        last_section = target;
        last_key = key;
    }
    return file;
}

ConfigFile ConfigFile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("config", "path", "cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

bool ConfigFile::has_section(const std::string& section) const { return values_.contains(section); }

bool ConfigFile::has(const std::string& section, const std::string& key) const {
    const auto it = values_.find(section);
    return it != values_.end() && it->second.contains(key);
}

std::vector<std::string> ConfigFile::sections() const { return order_; }

const std::string& ConfigFile::raw(const std::string& section, const std::string& key) const {
    const auto it = values_.find(section);
    if (it == values_.end() || !it->second.contains(key))
        throw ValidationError(section, key, "missing required key");
    return it->second.at(key);
}

void ConfigFile::set(const std::string& section, const std::string& key, const std::string& value) {
    if (!values_.contains(section))
        order_.push_back(section);
    values_[section][key] = value;
}

double ConfigFile::number(const std::string& section, const std::string& key) const {
    double x = 0.0;
    if (!parse_number(raw(section, key), x))
        throw ValidationError(section, key, "expected a number, got '" + raw(section, key) + "'");
    return x;
}

double ConfigFile::number_or(const std::string& section, const std::string& key, double fallback) const {
    return has(section, key) ? number(section, key) : fallback;
}

std::size_t ConfigFile::integer(const std::string& section, const std::string& key) const {
    const std::string& s = raw(section, key);
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw ValidationError(section, key, "expected a non-negative integer, got '" + s + "'");
    return static_cast<std::size_t>(value);
}

std::string ConfigFile::text(const std::string& section, const std::string& key) const {
    std::string s = raw(section, key);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
        s = s.substr(1, s.size() - 2);
    return s;
}

Vector ConfigFile::vector(const std::string& section, const std::string& key, std::size_t size) const {
    const std::string& s = raw(section, key);
    if (s.find('[') == std::string::npos) {
        if (size == 0)
            throw ValidationError(section, key, "expected a bracketed list");
        return Vector::Constant(static_cast<Eigen::Index>(size), number(section, key));
    }
    const auto groups = bracket_groups(s, section, key);
    if (groups.size() != 1)
        throw ValidationError(section, key, "expected a single bracketed list");
    const auto values = parse_list(groups.front(), section, key);
    if (size > 0 && values.size() != size)
        throw ValidationError(section, key, "expected " + std::to_string(size) + " entries, got " +
                                                std::to_string(values.size()));
    return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

Matrix ConfigFile::matrix(const std::string& section, const std::string& key) const {
    const auto groups = bracket_groups(raw(section, key), section, key);
    if (groups.empty())
        throw ValidationError(section, key, "expected one bracketed row per line");
    std::vector<std::vector<double>> rows;
    for (const auto& g : groups)
        rows.push_back(parse_list(g, section, key));
    const auto cols = rows.front().size();
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols)
            throw ValidationError(section, key, "row " + std::to_string(i + 1) + " has " +
                                                    std::to_string(rows[i].size()) + " entries, expected " +
                                                    std::to_string(cols));
        for (std::size_t j = 0; j < cols; ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
    return m;
}

std::vector<double> ConfigFile::grid(const std::string& section, const std::string& key) const {
    const std::string& s = raw(section, key);
    if (s.find('[') != std::string::npos) {
        const Vector v = vector(section, key);
        return {v.data(), v.data() + v.size()};
    }
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ':'))
        parts.push_back(part);
    double start = 0.0, step = 0.0, stop = 0.0;
    if (parts.size() != 3 || !parse_number(parts[0], start) || !parse_number(parts[1], step) ||
        !parse_number(parts[2], stop) || !(step > 0.0) || stop < start)
        throw ValidationError(section, key, "expected a bracketed list or start:step:stop");
    std::vector<double> out;
    for (std::size_t i = 0;; ++i) {
        const double x = start + static_cast<double>(i) * step;
        if (x > stop + 1e-9 * step)
            break;
        out.push_back(x);
    }
    return out;
}

namespace {

std::size_t state_index(const ConfigFile& file, std::size_t states) {
    if (!file.has("chain", "initial"))
        return 0;
    const std::size_t one_based = file.integer("chain", "initial");
    if (one_based < 1 || one_based > states)
        throw ValidationError("chain", "initial", "state index must lie in 1.." + std::to_string(states));
    return one_based - 1;
}

ChainSpec build_chain(const ConfigFile& file) {
    const Vector states = file.vector("chain", "states");
    const auto m = static_cast<std::size_t>(states.size());
    if (file.has("chain", "M") && file.integer("chain", "M") != m)
        throw ValidationError("chain", "M", "does not match the number of states (" + std::to_string(m) + ")");
    const Vector rates = file.has("chain", "exit_rates") ? file.vector("chain", "exit_rates", m)
                                                          : Vector::Zero(static_cast<Eigen::Index>(m));
    const Matrix jumps = file.has("chain", "transitions")
                             ? file.matrix("chain", "transitions")
                             : Matrix::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    return ChainSpec(states, rates, jumps);
}

HazardSpec build_hazard(const ConfigFile& file, const ChainSpec& chain) {
    const std::size_t m = chain.size();
    const Vector intensity = file.has("hazard", "lambda") ? file.vector("hazard", "lambda", m) : chain.values();
    const bool has_p = file.has("hazard", "p");
    const bool has_c = file.has("hazard", "c");
    if (has_p == has_c)
        throw ValidationError("hazard", has_p ? "c" : "p", "exactly one of p and c must be given");
    if (has_p)
        return HazardSpec(intensity, file.vector("hazard", "p", m));
    const double c = file.number("hazard", "c");
    if (!(c > 0.0))
        throw ValidationError("hazard", "c", "shape parameter must be positive");
    Vector p(static_cast<Eigen::Index>(m));
    for (Eigen::Index j = 0; j < p.size(); ++j)
        p[j] = -std::expm1(-c * chain.values()[j]);
    return HazardSpec(intensity, p);
}

void require_chain(const RunConfig& config, const char* section) {
    if (!config.chain)
        throw ValidationError(section, "*", "requires a [chain] section");
}

} // namespace

RunConfig build_run_config(const ConfigFile& file) {
    RunConfig config;
    double longest = 0.0;

    if (file.has_section("chain")) {
        config.chain = build_chain(file);
        config.initial_state = state_index(file, config.chain->size());
    }
    if (file.has_section("hazard")) {
        require_chain(config, "hazard");
        config.hazard = build_hazard(file, *config.chain);
    }
    if (file.has_section("query")) {
        if (file.has("query", "t")) {
            config.query_time = file.number("query", "t");
            if (!(*config.query_time >= 0.0))
                throw ValidationError("query", "t", "time must be non-negative");
            longest = std::max(longest, *config.query_time);
        }
        if (file.has("query", "u")) {
            require_chain(config, "query");
            config.query_weights = file.vector("query", "u", config.chain->size());
        }
        if (file.has("query", "method")) {
            const std::string method = file.text("query", "method");
            if (method == "expm")
                config.mgf_method = MgfMethod::MatrixExponential;
            else if (method == "rk4")
                config.mgf_method = MgfMethod::RungeKutta;
            else
                throw ValidationError("query", "method", "expected expm or rk4, got '" + method + "'");
        }
    }
    if (file.has_section("claim")) {
        require_chain(config, "claim");
        const std::size_t m = config.chain->size();
        const auto eigen_m = static_cast<Eigen::Index>(m);
        ClaimSpec claim;
        claim.rate = file.has("claim", "r") ? file.vector("claim", "r", m) : Vector::Zero(eigen_m);
        claim.terminal = file.has("claim", "terminal") ? file.vector("claim", "terminal", m) : Vector::Ones(eigen_m);
        claim.stream = file.has("claim", "stream") ? file.vector("claim", "stream", m) : Vector::Zero(eigen_m);
        claim.recovery = file.has("claim", "recovery") ? file.vector("claim", "recovery", m) : Vector::Zero(eigen_m);
        claim.validate(m);
        config.claim = claim;
        config.claim_maturity = file.number("claim", "T");
        if (!(config.claim_maturity >= 0.0))
            throw ValidationError("claim", "T", "maturity must be non-negative");
        longest = std::max(longest, config.claim_maturity);
    }
    if (file.has_section("contract")) {
        require_chain(config, "contract");
        config.contract.emplace(file.integer("contract", "n"), file.number("contract", "b"),
                                file.number("contract", "c"), file.number_or("contract", "r", 0.0),
                                file.number("contract", "T"),
                                file.has("contract", "k") ? file.integer("contract", "k") : 1, *config.chain,
                                config.initial_state);
        longest = std::max(longest, config.contract->maturity());
    }
    if (file.has_section("sweep")) {
        config.contagion_grid = file.grid("sweep", "b_grid");
        config.shape_grid = file.grid("sweep", "c_grid");
        if (config.contagion_grid.empty())
            throw ValidationError("sweep", "b_grid", "grid must not be empty");
        if (config.shape_grid.empty())
            throw ValidationError("sweep", "c_grid", "grid must not be empty");
    }
    if (file.has_section("two_firm")) {
        config.two_firm.emplace(file.number("two_firm", "a1"), file.number("two_firm", "a2"),
                                file.number("two_firm", "b1"), file.number("two_firm", "b2"),
                                file.number("two_firm", "p"), file.number_or("two_firm", "r", 0.0),
                                file.number("two_firm", "T"));
        longest = std::max(longest, config.two_firm->maturity());
        if (file.has("two_firm", "t_grid")) {
            config.time_grid = file.grid("two_firm", "t_grid");
            for (double t : config.time_grid)
                if (!(t >= 0.0))
                    throw ValidationError("two_firm", "t_grid", "times must be non-negative");
        } else {
            for (int i = 0; i <= 10; ++i)
                config.time_grid.push_back(config.two_firm->maturity() * i / 10.0);
        }
    }

    if (file.has("mc", "paths"))
        config.mc.paths = file.integer("mc", "paths");
    if (file.has("mc", "seed"))
        config.mc.seed = file.integer("mc", "seed");
    if (file.has("mc", "workers"))
        config.mc.workers = static_cast<unsigned>(file.integer("mc", "workers"));
    // Default censoring horizon: four times the longest maturity in the file.
    config.mc.horizon = file.has("mc", "horizon") ? file.number("mc", "horizon") : std::max(4.0 * longest, 1.0);
    config.mc.validate();
    if (config.mc.horizon < longest)
        throw ValidationError("mc", "horizon", "must cover every maturity and query time in the file");

    if (file.has("output", "format")) {
        const std::string format = file.text("output", "format");
        if (format == "csv")
            config.format = OutputFormat::Csv;
        else if (format == "json")
            config.format = OutputFormat::Json;
        else
            throw ValidationError("output", "format", "expected csv or json, got '" + format + "'");
    }
    if (file.has("output", "path"))
        config.output_path = file.text("output", "path");
    return config;
}

} // namespace trigger
