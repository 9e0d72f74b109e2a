#include "snowaug/cli/run_config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "detail/text_util.hpp"
#include "snowaug/core/error.hpp"

namespace snowaug {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Strips a trailing '#' comment that is not inside a quoted string.
std::string_view strip_comment(std::string_view s) {
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\\' && quoted) {
            ++i;
        } else if (s[i] == '"') {
            quoted = !quoted;
        } else if (s[i] == '#' && !quoted) {
            return s.substr(0, i);
        }
    }
    return s;
}

bool valid_key(std::string_view k) {
    if (k.empty()) return false;
    for (char c : k) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-')) return false;
    }
    return true;
}

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& what) {
    throw ConfigError(source + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

ConfigDocument parse_config_text(std::string_view text, const std::string& source_name) {
    ConfigDocument doc;
    std::string section;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        const auto line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']' && line.find('=') == std::string_view::npos) {
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (!valid_key(section)) fail(source_name, line_no, "invalid section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail(source_name, line_no, "expected 'key = value'");
        const auto key_part = trim(line.substr(0, eq));
        const auto value_part = trim(line.substr(eq + 1));
        if (!valid_key(key_part)) fail(source_name, line_no, "invalid key '" + std::string(key_part) + "'");
        if (value_part.empty()) fail(source_name, line_no, "missing value");

        ConfigValue value;
        value.line = line_no;
        if (value_part.front() == '"') {
            if (value_part.size() < 2 || value_part.back() != '"') fail(source_name, line_no, "unterminated string");
            value.kind = ConfigValue::Kind::String;
            const auto body = value_part.substr(1, value_part.size() - 2);
            for (std::size_t i = 0; i < body.size(); ++i) {
                if (body[i] == '\\' && i + 1 < body.size()) {
                    value.text += body[++i];
                } else if (body[i] == '"') {
                    fail(source_name, line_no, "stray quote in string");
                } else {
                    value.text += body[i];
                }
            }
        } else if (value_part.front() == '[') {
            if (value_part.back() != ']') fail(source_name, line_no, "unterminated array");
            value.kind = ConfigValue::Kind::Array;
            auto body = trim(value_part.substr(1, value_part.size() - 2));
            while (!body.empty()) {
                const auto comma = body.find(',');
                const auto item = trim(body.substr(0, comma));
                if (item.empty()) fail(source_name, line_no, "empty array element");
                value.items.emplace_back(item);
                if (comma == std::string_view::npos) break;
                body = trim(body.substr(comma + 1));
                if (body.empty()) fail(source_name, line_no, "trailing comma in array");
            }
        } else {
            value.kind = ConfigValue::Kind::Number;
            value.text = std::string(value_part);
        }

        std::string key = section.empty() ? std::string(key_part) : section + "." + std::string(key_part);
        if (doc.count(key)) fail(source_name, line_no, "duplicate key '" + key + "'");
        doc.emplace(std::move(key), std::move(value));
    }
    return doc;
}

namespace {

std::string where(const std::string& key, const ConfigValue& v) {
    return "line " + std::to_string(v.line) + ": '" + key + "'";
}

double as_real(const std::string& key, const ConfigValue& v) {
    if (v.kind != ConfigValue::Kind::Number) throw ConfigError(where(key, v) + " expects a number");
    const auto d = detail::parse_double(v.text);
    if (!d || !std::isfinite(*d)) throw ConfigError(where(key, v) + " is not a finite number: " + v.text);
    return *d;
}

template <typename Int>
Int as_int(const std::string& key, const ConfigValue& v) {
    if (v.kind != ConfigValue::Kind::Number) throw ConfigError(where(key, v) + " expects an integer");
    const auto i = detail::parse_int<Int>(v.text);
    if (!i) throw ConfigError(where(key, v) + " is not a valid integer: " + v.text);
    return *i;
}

std::string as_string(const std::string& key, const ConfigValue& v) {
    if (v.kind != ConfigValue::Kind::String) throw ConfigError(where(key, v) + " expects a quoted string");
    return v.text;
}

std::vector<double> as_real_array(const std::string& key, const ConfigValue& v) {
    if (v.kind != ConfigValue::Kind::Array) throw ConfigError(where(key, v) + " expects an array");
    std::vector<double> out;
    for (const auto& item : v.items) {
        const auto d = detail::parse_double(item);
        if (!d || !std::isfinite(*d)) throw ConfigError(where(key, v) + " has a non-numeric element: " + item);
        out.push_back(*d);
    }
    return out;
}

std::vector<int> as_int_array(const std::string& key, const ConfigValue& v) {
    if (v.kind != ConfigValue::Kind::Array) throw ConfigError(where(key, v) + " expects an array");
    std::vector<int> out;
    for (const auto& item : v.items) {
        const auto i = detail::parse_int<int>(item);
        if (!i) throw ConfigError(where(key, v) + " has a non-integer element: " + item);
        out.push_back(*i);
    }
    return out;
}

}  // namespace

void RunConfig::validate() const {
    snow.validate();
    mix.validate();
    if (workers == 0) throw ConfigError("workers must be >= 1");
}

RunConfig apply_config(const ConfigDocument& doc, RunConfig base) {
    using Setter = std::function<void(RunConfig&, const std::string&, const ConfigValue&)>;
    const std::map<std::string, Setter> setters = {
        {"seed", [](RunConfig& c, auto& k, auto& v) { c.set_seed(as_int<std::uint64_t>(k, v)); }},
        {"workers", [](RunConfig& c, auto& k, auto& v) { c.workers = as_int<std::size_t>(k, v); }},
        {"snow.working_width", [](RunConfig& c, auto& k, auto& v) { c.snow.working_width = as_int<std::size_t>(k, v); }},
        {"snow.working_height", [](RunConfig& c, auto& k, auto& v) { c.snow.working_height = as_int<std::size_t>(k, v); }},
        {"snow.scale_array", [](RunConfig& c, auto& k, auto& v) { c.snow.scale_array = as_real_array(k, v); }},
        {"snow.noise_mean", [](RunConfig& c, auto& k, auto& v) { c.snow.noise_mean = as_real(k, v); }},
        {"snow.noise_std", [](RunConfig& c, auto& k, auto& v) { c.snow.noise_std = as_real(k, v); }},
        {"snow.coverage_quantile", [](RunConfig& c, auto& k, auto& v) { c.snow.coverage_quantile = as_real(k, v); }},
        {"snow.base_sigma", [](RunConfig& c, auto& k, auto& v) { c.snow.base_sigma = as_real(k, v); }},
        {"snow.smoothing_constant", [](RunConfig& c, auto& k, auto& v) { c.snow.smoothing_constant = as_real(k, v); }},
        {"snow.blur_lengths", [](RunConfig& c, auto& k, auto& v) { c.snow.blur_lengths = as_int_array(k, v); }},
        {"snow.angle_min", [](RunConfig& c, auto& k, auto& v) { c.snow.angle_min = as_real(k, v); }},
        {"snow.angle_max", [](RunConfig& c, auto& k, auto& v) { c.snow.angle_max = as_real(k, v); }},
        {"mix.p_synthetic", [](RunConfig& c, auto& k, auto& v) { c.mix.p_synthetic = as_real(k, v); }},
        {"io.input", [](RunConfig& c, auto& k, auto& v) { c.io.input = as_string(k, v); }},
        {"io.output", [](RunConfig& c, auto& k, auto& v) { c.io.output = as_string(k, v); }},
        {"io.format",
         [](RunConfig& c, auto& k, auto& v) {
             try {
                 c.io.format = parse_annotation_format(as_string(k, v));
             } catch (const InvalidArgument& e) {
                 throw ConfigError(where(k, v) + ": " + e.what());
             }
         }},
    };

    for (const auto& [key, value] : doc) {
        const auto it = setters.find(key);
        if (it == setters.end()) throw ConfigError("line " + std::to_string(value.line) + ": unknown key '" + key + "'");
        it->second(base, key, value);
    }
    base.validate();
    return base;
}

RunConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return apply_config(parse_config_text(ss.str(), path.string()));
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        if (msg.rfind(path.string(), 0) == 0) throw;
        throw ConfigError(path.string() + ": " + msg);
    }
}

}  // namespace snowaug
