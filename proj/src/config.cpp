#include "c2lse/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "c2lse/csv.hpp"

namespace c2lse {

namespace {

[[noreturn]] void parse_fail(const std::string& origin, int line, const std::string& what) {
    std::ostringstream msg;
    msg << origin << ":" << line << ": " << what;
    throw std::runtime_error(msg.str());
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

// strips a trailing comment that is not inside a string literal
std::string strip_comment(const std::string& s) {
    bool in_string = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') in_string = !in_string;
        if (s[i] == '#' && !in_string) return s.substr(0, i);
    }
    return s;
}

bool valid_key(const std::string& key) {
    if (key.empty()) return false;
    for (char c : key)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') return false;
    return true;
}

TomlValue parse_scalar(const std::string& text, const std::string& origin, int line) {
    TomlValue value;
    value.line = line;
    if (text.size() >= 2 && text.front() == '"' && text.back() == '"') {
        value.kind = TomlValue::Kind::String;
        value.string_value = text.substr(1, text.size() - 2);
        return value;
    }
    if (text == "true" || text == "false") {
        value.kind = TomlValue::Kind::Boolean;
        value.boolean_value = (text == "true");
        return value;
    }
    errno = 0;
    char* end = nullptr;
    const long long as_int = std::strtoll(text.c_str(), &end, 10);
    if (end != text.c_str() && *end == '\0' && errno == 0) {
        value.kind = TomlValue::Kind::Integer;
        value.integer_value = as_int;
        value.float_value = static_cast<double>(as_int);
        return value;
    }
    errno = 0;
    const double as_float = std::strtod(text.c_str(), &end);
    if (end != text.c_str() && *end == '\0' && errno == 0) {
        value.kind = TomlValue::Kind::Float;
        value.float_value = as_float;
        return value;
    }
    parse_fail(origin, line, "cannot parse value '" + text + "'");
}

TomlValue parse_value(const std::string& text, const std::string& origin, int line) {
    if (!text.empty() && text.front() == '[') {
        if (text.back() != ']') parse_fail(origin, line, "unterminated array");
        TomlValue value;
        value.kind = TomlValue::Kind::Array;
        value.line = line;
        const std::string body = trim(text.substr(1, text.size() - 2));
        if (body.empty()) return value;
        std::size_t start = 0;
        bool in_string = false;
        for (std::size_t i = 0; i <= body.size(); ++i) {
            if (i < body.size() && body[i] == '"') in_string = !in_string;
            if (i == body.size() || (body[i] == ',' && !in_string)) {
                const std::string item = trim(body.substr(start, i - start));
                if (item.empty()) parse_fail(origin, line, "empty array element");
                value.array.push_back(parse_scalar(item, origin, line));
                start = i + 1;
            }
        }
        return value;
    }
    return parse_scalar(text, origin, line);
}

}  // namespace

double TomlValue::as_number() const {
    if (kind == Kind::Integer) return static_cast<double>(integer_value);
    if (kind == Kind::Float) return float_value;
    throw std::runtime_error("value is not numeric");
}

TomlTable parse_toml(const std::string& text, const std::string& origin) {
    TomlTable table;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') parse_fail(origin, line_no, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (!valid_key(section)) parse_fail(origin, line_no, "invalid section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) parse_fail(origin, line_no, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        if (!valid_key(key)) parse_fail(origin, line_no, "invalid key '" + key + "'");
        const std::string value_text = trim(line.substr(eq + 1));
        if (value_text.empty()) parse_fail(origin, line_no, "missing value for key '" + key + "'");
        const std::string full_key = section.empty() ? key : section + "." + key;
        table[full_key] = parse_value(value_text, origin, line_no);
    }
    return table;
}

TomlTable parse_toml_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_toml(buffer.str(), path);
}

namespace {

class ConfigReader {
public:
    ConfigReader(const TomlTable& table, std::string origin)
        : table_(table), origin_(std::move(origin)) {}

    [[noreturn]] void type_fail(const std::string& key, const std::string& expected) const {
        throw std::runtime_error(origin_ + ": key '" + key + "' expects " + expected);
    }

    const TomlValue* find(const std::string& key) {
        seen_.insert(key);
        const auto it = table_.find(key);
        return it == table_.end() ? nullptr : &it->second;
    }

    void string_into(const std::string& key, std::string& out) {
        if (const TomlValue* v = find(key)) {
            if (v->kind != TomlValue::Kind::String) type_fail(key, "a string");
            out = v->string_value;
        }
    }
    void number_into(const std::string& key, double& out) {
        if (const TomlValue* v = find(key)) {
            if (v->kind != TomlValue::Kind::Integer && v->kind != TomlValue::Kind::Float)
                type_fail(key, "a number");
            out = v->as_number();
        }
    }
    void int_into(const std::string& key, int& out) {
        if (const TomlValue* v = find(key)) {
            if (v->kind != TomlValue::Kind::Integer) type_fail(key, "an integer");
            out = static_cast<int>(v->integer_value);
        }
    }
    void bool_into(const std::string& key, bool& out) {
        if (const TomlValue* v = find(key)) {
            if (v->kind != TomlValue::Kind::Boolean) type_fail(key, "a boolean (true/false)");
            out = v->boolean_value;
        }
    }
    void seeds_into(const std::string& key, std::vector<std::uint64_t>& out) {
        if (const TomlValue* v = find(key)) {
            if (v->kind != TomlValue::Kind::Array) type_fail(key, "an array of integers");
            out.clear();
            for (const TomlValue& item : v->array) {
                if (item.kind != TomlValue::Kind::Integer || item.integer_value < 0)
                    type_fail(key, "an array of nonnegative integers");
                out.push_back(static_cast<std::uint64_t>(item.integer_value));
            }
        }
    }
    void strings_into(const std::string& key, std::vector<std::string>& out) {
        if (const TomlValue* v = find(key)) {
            if (v->kind != TomlValue::Kind::Array) type_fail(key, "an array of strings");
            out.clear();
            for (const TomlValue& item : v->array) {
                if (item.kind != TomlValue::Kind::String) type_fail(key, "an array of strings");
                out.push_back(item.string_value);
            }
        }
    }

    void reject_unknown() const {
        for (const auto& [key, value] : table_)
            if (!seen_.count(key))
                throw std::runtime_error(origin_ + ": unknown key '" + key + "'");
    }

private:
    const TomlTable& table_;
    std::string origin_;
    std::set<std::string> seen_;
};

}  // namespace

ExperimentConfig config_from_table(const TomlTable& table, const std::string& origin) {
    ExperimentConfig config;
    ConfigReader reader(table, origin);

    reader.string_into("problem", config.problem);
    reader.string_into("data", config.data);
    reader.strings_into("point_columns", config.point_columns);
    reader.string_into("value_column", config.value_column);
    reader.number_into("threshold", config.threshold);

    std::string method = to_string(config.method);
    reader.string_into("method", method);
    config.method = acquisition_method_from_string(method);

    reader.number_into("epsilon", config.epsilon);
    reader.number_into("beta", config.beta);
    reader.number_into("straddle_kappa", config.straddle_kappa);
    reader.int_into("budget", config.budget);
    reader.int_into("n_init", config.n_init);
    reader.number_into("noise_variance", config.noise_variance);
    reader.seeds_into("seeds", config.seeds);
    reader.int_into("refit_every", config.refit_every);
    reader.int_into("eval_every", config.eval_every);
    reader.int_into("search.n_raw_samples", config.n_raw_samples);
    reader.int_into("search.n_restarts", config.n_restarts);
    reader.int_into("search.max_refine_iters", config.max_refine_iters);
    reader.bool_into("record_timings", config.record_timings);

    reader.reject_unknown();
    config.validate();
    return config;
}

ExperimentConfig parse_config(const std::string& path, const std::vector<std::string>& overrides) {
    TomlTable table = parse_toml_file(path);
    for (const std::string& line : overrides) {
        TomlTable patch = parse_toml(line, "--set " + line);
        for (auto& [key, value] : patch) table[key] = std::move(value);
    }
    return config_from_table(table, path);
}

std::string resolved_config_toml(const ExperimentConfig& config) {
    std::ostringstream out;
    out << "# resolved configuration (defaults applied)\n";
    if (!config.problem.empty()) out << "problem = \"" << config.problem << "\"\n";
    if (!config.data.empty()) {
        out << "data = \"" << config.data << "\"\n";
        out << "point_columns = [";
        for (std::size_t i = 0; i < config.point_columns.size(); ++i)
            out << (i ? ", " : "") << "\"" << config.point_columns[i] << "\"";
        out << "]\n";
        out << "value_column = \"" << config.value_column << "\"\n";
        out << "threshold = " << format_double(config.threshold) << "\n";
    }
    out << "method = \"" << to_string(config.method) << "\"\n";
    out << "epsilon = " << format_double(config.epsilon) << "\n";
    out << "beta = " << format_double(config.beta) << "\n";
    out << "straddle_kappa = " << format_double(config.straddle_kappa) << "\n";
    out << "budget = " << config.budget << "\n";
    out << "n_init = " << config.n_init << "\n";
    out << "noise_variance = " << format_double(config.noise_variance) << "\n";
    out << "seeds = [";
    for (std::size_t i = 0; i < config.seeds.size(); ++i)
        out << (i ? ", " : "") << config.seeds[i];
    out << "]\n";
    out << "refit_every = " << config.refit_every << "\n";
    out << "eval_every = " << config.eval_every << "\n";
    out << "record_timings = " << (config.record_timings ? "true" : "false") << "\n";
    out << "\n[search]\n";
    out << "n_raw_samples = " << config.n_raw_samples << "\n";
    out << "n_restarts = " << config.n_restarts << "\n";
    out << "max_refine_iters = " << config.max_refine_iters << "\n";
    return out.str();
}

}  // namespace c2lse
