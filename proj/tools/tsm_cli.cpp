// Batch front end for the verification library.  Seven subcommands:
//
//   basis         emit orthonormal bases of the bigraded harmonic spaces
//   decompose     split a bihomogeneous polynomial into harmonic layers
//   mean          evaluate a single twisted / left / Euclidean spherical mean
//   verify        direct membership check: twisted means over a sampled
//                 admissible set must vanish relative to the function size
//   characterize  coefficient-level fits against the exterior profile bases
//                 (one-sided, two-sided, or Euclidean)
//   support       support-radius estimation from vanishing means
//   selftest      the full acceptance suite, with its artifact bundle
//
// Every job is described by the same JSON document: all numeric values are
// decimal strings (locale- and precision-stable), unknown keys are rejected,
// and command-line flags mirror the document fields one for one.  A file
// given with --config overrides any flags.  Artifacts are byte-identical for
// identical configs and seeds, independent of the thread count (--threads or
// the TSM_THREADS environment variable; never part of the config).
//
// Exit status: 0 verdict member / consistent / clean, 2 non-member or
// inconsistent, 3 inconclusive, 1 usage or runtime error.

#include "tsm/builtins.hpp"
#include "tsm/harmonic.hpp"
#include "tsm/selftest.hpp"
#include "tsm/zspace.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitClean = 0;
constexpr int kExitError = 1;
constexpr int kExitNonMember = 2;
constexpr int kExitInconclusive = 3;

// Raised for every config / input problem; the message names the field.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ======================= file IO =======================

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write file '" + path.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw ConfigError("write failed for '" + path.string() + "'");
}

// ======================= decimal-string numerics =======================

// All numbers travel as decimal strings; parsing is strict (whole token,
// locale-independent) and every failure names the config field.

double parse_decimal(const std::string& text, const std::string& field, bool allow_inf = false) {
    std::string t = text;
    if (!t.empty() && t.front() == '+') t.erase(t.begin());
    if (allow_inf && (t == "inf" || t == "Inf" || t == "INF"))
        return std::numeric_limits<double>::infinity();
    double value = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size() || !std::isfinite(value))
        throw ConfigError("config field '" + field + "': expected a decimal string, got \"" +
                          text + "\"");
    return value;
}

long long parse_integer(const std::string& text, const std::string& field) {
    std::string t = text;
    if (!t.empty() && t.front() == '+') t.erase(t.begin());
    long long value = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size())
        throw ConfigError("config field '" + field + "': expected an integer string, got \"" +
                          text + "\"");
    return value;
}

unsigned long long parse_unsigned(const std::string& text, const std::string& field) {
    const long long v = parse_integer(text, field);
    if (v < 0) throw ConfigError("config field '" + field + "': must be non-negative");
    return static_cast<unsigned long long>(v);
}

// ======================= strict JSON access =======================

std::string json_type_name(const json& v) {
    if (v.is_object()) return "object";
    if (v.is_array()) return "array";
    if (v.is_string()) return "string";
    if (v.is_boolean()) return "boolean";
    if (v.is_null()) return "null";
    return "number";
}

const json& expect_object(const json& v, const std::string& field) {
    if (!v.is_object())
        throw ConfigError("config field '" + field + "': expected an object, got " +
                          json_type_name(v));
    return v;
}

std::string expect_string(const json& v, const std::string& field) {
    if (!v.is_string())
        throw ConfigError("config field '" + field +
                          "': expected a decimal string (numbers must be quoted), got " +
                          json_type_name(v));
    return v.get<std::string>();
}

std::vector<std::string> expect_string_array(const json& v, const std::string& field) {
    if (!v.is_array())
        throw ConfigError("config field '" + field + "': expected an array of strings, got " +
                          json_type_name(v));
    std::vector<std::string> out;
    for (size_t i = 0; i < v.size(); ++i)
        out.push_back(expect_string(v[i], field + "[" + std::to_string(i) + "]"));
    return out;
}

void reject_unknown(const json& obj, const std::string& path, const std::set<std::string>& allowed,
                    const std::string& where) {
    for (const auto& [key, _] : obj.items()) {
        if (allowed.count(key)) continue;
        const std::string full = path.empty() ? key : path + "." + key;
        throw ConfigError("config field '" + full + "': unknown key" +
                          (where.empty() ? "" : " for " + where));
    }
}

// Line number of a byte offset, for parse diagnostics.
int line_of_byte(const std::string& text, size_t byte) {
    int line = 1;
    for (size_t i = 0; i < text.size() && i < byte; ++i)
        if (text[i] == '\n') ++line;
    return line;
}

json parse_config_text(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(origin + ": parse error at line " +
                          std::to_string(line_of_byte(text, e.byte ? e.byte - 1 : 0)) + ": " +
                          e.what());
    }
}

// File config wins over flag config: scalars and arrays replace, objects
// merge key by key.
void overlay(json& base, const json& patch) {
    if (!base.is_object() || !patch.is_object()) {
        base = patch;
        return;
    }
    for (const auto& [key, value] : patch.items()) {
        if (base.contains(key) && base[key].is_object() && value.is_object())
            overlay(base[key], value);
        else
            base[key] = value;
    }
}

// ======================= job schema =======================

struct FunctionSpec {
    std::string name;
    int p = 0, q = 0, i = 1, k = 1, j = 0, m = 0;
    int sign = -1;
    std::vector<int> alpha, beta;
    std::vector<std::complex<double>> center;
    double radius = 1.0;
    std::complex<double> value{1.0, 0.0};
    std::string profile_file, poly_file;
};

struct Job {
    std::string command;
    int n = 0;
    double r = 1.0;
    double R = std::numeric_limits<double>::infinity();
    double lambda = 1.0;
    std::vector<std::pair<int, int>> degrees;
    std::vector<int> k_list;
    int order = 0;  // 0 = resolved per command
    int grid_count = 24;
    std::string grid_placement = "chebyshev";
    double tol_member = 1e-8, tol_reject = 1e-4, tol_support = 1e-6;
    FunctionSpec fn;
    std::string poly_file;  // decompose input
    std::vector<std::complex<double>> z;
    double s = 0.0;
    std::string kind = "twisted";    // mean
    std::string mode;                // characterize / support
    std::string side = "right";      // verify
    tsm::PairPolicy pairs;           // verify / two-sided
    tsm::SupportPolicy support;      // support
    double r_max = 2.0;
    unsigned long long seed = 0;
    std::string output = ".";
};

std::vector<int> to_int_vector(const std::vector<std::string>& items, const std::string& field) {
    std::vector<int> out;
    for (size_t i = 0; i < items.size(); ++i)
        out.push_back(static_cast<int>(
            parse_integer(items[i], field + "[" + std::to_string(i) + "]")));
    return out;
}

// Points are flat [re, im, re, im, ...] decimal-string arrays.
std::vector<std::complex<double>> to_point(const std::vector<std::string>& items, int n,
                                           const std::string& field) {
    if (static_cast<int>(items.size()) != 2 * n)
        throw ConfigError("config field '" + field + "': expected " + std::to_string(2 * n) +
                          " entries (re, im per coordinate), got " +
                          std::to_string(items.size()));
    std::vector<std::complex<double>> out(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j)
        out[static_cast<size_t>(j)] = {
            parse_decimal(items[static_cast<size_t>(2 * j)],
                          field + "[" + std::to_string(2 * j) + "]"),
            parse_decimal(items[static_cast<size_t>(2 * j + 1)],
                          field + "[" + std::to_string(2 * j + 1) + "]")};
    return out;
}

FunctionSpec resolve_function(const json& cfg) {
    const json& f = expect_object(cfg.at("function"), "function");
    if (!f.contains("name")) throw ConfigError("config field 'function.name': required");
    FunctionSpec spec;
    spec.name = expect_string(f.at("name"), "function.name");

    static const std::map<std::string, std::set<std::string>> params = {
        {"constant", {"name", "value"}},
        {"gaussian", {"name", "sign"}},
        {"bump", {"name", "center", "radius"}},
        {"thm33", {"name", "p", "q", "i", "j"}},
        {"thm34", {"name", "p", "q", "k", "j"}},
        {"monomial", {"name", "alpha", "beta"}},
        {"euclidean_model", {"name", "p", "q", "m", "j"}},
        {"structured", {"name", "profile", "poly"}},
    };
    const auto it = params.find(spec.name);
    if (it == params.end()) {
        std::string names;
        for (const auto& [k, _] : params) names += (names.empty() ? "" : ", ") + k;
        throw ConfigError("config field 'function.name': unknown builtin \"" + spec.name +
                          "\" (available: " + names + ")");
    }
    reject_unknown(f, "function", it->second, "builtin '" + spec.name + "'");

    const auto need = [&](const char* key) -> const json& {
        if (!f.contains(key))
            throw ConfigError("config field 'function." + std::string(key) +
                              "': required by builtin '" + spec.name + "'");
        return f.at(key);
    };
    const auto opt_int = [&](const char* key, int fallback) {
        return f.contains(key) ? static_cast<int>(parse_integer(
                                     expect_string(f.at(key), std::string("function.") + key),
                                     std::string("function.") + key))
                               : fallback;
    };

    if (spec.name == "constant") {
        if (f.contains("value")) {
            const auto v = expect_string_array(f.at("value"), "function.value");
            if (v.size() != 2)
                throw ConfigError("config field 'function.value': expected [re, im]");
            spec.value = {parse_decimal(v[0], "function.value[0]"),
                          parse_decimal(v[1], "function.value[1]")};
        }
    } else if (spec.name == "gaussian") {
        spec.sign = opt_int("sign", -1);
    } else if (spec.name == "bump") {
        if (f.contains("center"))
            spec.center.clear();  // resolved against n later; keep raw strings
        spec.radius = f.contains("radius")
                          ? parse_decimal(expect_string(f.at("radius"), "function.radius"),
                                          "function.radius")
                          : 1.0;
    } else if (spec.name == "thm33") {
        spec.p = static_cast<int>(parse_integer(expect_string(need("p"), "function.p"), "function.p"));
        spec.q = static_cast<int>(parse_integer(expect_string(need("q"), "function.q"), "function.q"));
        spec.i = static_cast<int>(parse_integer(expect_string(need("i"), "function.i"), "function.i"));
        spec.j = opt_int("j", 0);
    } else if (spec.name == "thm34") {
        spec.p = static_cast<int>(parse_integer(expect_string(need("p"), "function.p"), "function.p"));
        spec.q = static_cast<int>(parse_integer(expect_string(need("q"), "function.q"), "function.q"));
        spec.k = static_cast<int>(parse_integer(expect_string(need("k"), "function.k"), "function.k"));
        spec.j = opt_int("j", 0);
    } else if (spec.name == "monomial") {
        spec.alpha = to_int_vector(expect_string_array(need("alpha"), "function.alpha"),
                                   "function.alpha");
        spec.beta = to_int_vector(expect_string_array(need("beta"), "function.beta"),
                                  "function.beta");
    } else if (spec.name == "euclidean_model") {
        spec.p = static_cast<int>(parse_integer(expect_string(need("p"), "function.p"), "function.p"));
        spec.q = static_cast<int>(parse_integer(expect_string(need("q"), "function.q"), "function.q"));
        spec.m = static_cast<int>(parse_integer(expect_string(need("m"), "function.m"), "function.m"));
        spec.j = opt_int("j", 0);
    } else if (spec.name == "structured") {
        spec.profile_file = expect_string(need("profile"), "function.profile");
        spec.poly_file = expect_string(need("poly"), "function.poly");
    }
    return spec;
}

std::vector<std::pair<int, int>> resolve_degrees(const json& v, const std::string& field) {
    if (!v.is_array())
        throw ConfigError("config field '" + field + "': expected an array of [p, q] pairs");
    std::vector<std::pair<int, int>> out;
    for (size_t i = 0; i < v.size(); ++i) {
        const std::string at = field + "[" + std::to_string(i) + "]";
        const auto pair = expect_string_array(v[i], at);
        if (pair.size() != 2)
            throw ConfigError("config field '" + at + "': expected [\"p\", \"q\"]");
        const int p = static_cast<int>(parse_integer(pair[0], at + "[0]"));
        const int q = static_cast<int>(parse_integer(pair[1], at + "[1]"));
        if (p < 0 || q < 0) throw ConfigError("config field '" + at + "': degrees must be >= 0");
        out.push_back({p, q});
    }
    if (out.empty()) throw ConfigError("config field '" + field + "': must not be empty");
    return out;
}

Job resolve_job(const json& cfg, const std::string& command) {
    expect_object(cfg, "<config>");

    std::set<std::string> allowed = {"command", "output", "seed"};
    const bool needs_fn = command == "mean" || command == "verify" || command == "characterize" ||
                          command == "support";
    if (command == "basis") allowed.insert({"n", "degrees"});
    if (command == "decompose") allowed.insert({"n", "poly"});
    if (needs_fn) allowed.insert({"n", "lambda", "order", "function"});
    if (command == "mean") allowed.insert({"z", "s", "kind"});
    if (command == "verify") allowed.insert({"annulus", "pairs", "tolerance", "side"});
    if (command == "characterize")
        allowed.insert({"annulus", "grid", "degrees", "k_list", "tolerance", "mode"});
    if (command == "support") allowed.insert({"r_max", "support", "tolerance", "mode"});
    reject_unknown(cfg, "", allowed, "command '" + command + "'");

    Job job;
    job.command = command;
    if (cfg.contains("command")) {
        const std::string c = expect_string(cfg.at("command"), "command");
        if (c != command)
            throw ConfigError("config field 'command': \"" + c +
                              "\" does not match the invoked subcommand '" + command + "'");
    }
    if (cfg.contains("output")) job.output = expect_string(cfg.at("output"), "output");
    if (cfg.contains("seed"))
        job.seed = parse_unsigned(expect_string(cfg.at("seed"), "seed"), "seed");

    if (allowed.count("n")) {
        if (cfg.contains("n")) {
            job.n = static_cast<int>(parse_integer(expect_string(cfg.at("n"), "n"), "n"));
            if (job.n < 1) throw ConfigError("config field 'n': must be >= 1");
        } else if (command != "decompose") {
            throw ConfigError("config field 'n': required");
        }
    }
    if (cfg.contains("lambda")) {
        job.lambda = parse_decimal(expect_string(cfg.at("lambda"), "lambda"), "lambda");
        if (!(job.lambda > 0)) throw ConfigError("config field 'lambda': must be positive");
    }
    if (cfg.contains("order")) {
        job.order = static_cast<int>(parse_integer(expect_string(cfg.at("order"), "order"), "order"));
        if (job.order < 1) throw ConfigError("config field 'order': must be >= 1");
    }

    if (cfg.contains("annulus")) {
        const json& a = expect_object(cfg.at("annulus"), "annulus");
        reject_unknown(a, "annulus", {"r", "R"}, "");
        if (!a.contains("r")) throw ConfigError("config field 'annulus.r': required");
        job.r = parse_decimal(expect_string(a.at("r"), "annulus.r"), "annulus.r");
        if (a.contains("R"))
            job.R = parse_decimal(expect_string(a.at("R"), "annulus.R"), "annulus.R", true);
    } else if (command == "verify" || command == "characterize") {
        throw ConfigError("config field 'annulus': required (give at least annulus.r / --r)");
    }

    if (cfg.contains("grid")) {
        const json& g = expect_object(cfg.at("grid"), "grid");
        reject_unknown(g, "grid", {"count", "placement"}, "");
        if (g.contains("count")) {
            job.grid_count = static_cast<int>(
                parse_integer(expect_string(g.at("count"), "grid.count"), "grid.count"));
            if (job.grid_count < 1) throw ConfigError("config field 'grid.count': must be >= 1");
        }
        if (g.contains("placement")) {
            job.grid_placement = expect_string(g.at("placement"), "grid.placement");
            if (job.grid_placement != "chebyshev" && job.grid_placement != "uniform")
                throw ConfigError(
                    "config field 'grid.placement': expected \"chebyshev\" or \"uniform\"");
        }
    }

    if (cfg.contains("tolerance")) {
        const json& t = expect_object(cfg.at("tolerance"), "tolerance");
        reject_unknown(t, "tolerance", {"member", "reject", "support"}, "");
        if (t.contains("member"))
            job.tol_member =
                parse_decimal(expect_string(t.at("member"), "tolerance.member"), "tolerance.member");
        if (t.contains("reject"))
            job.tol_reject =
                parse_decimal(expect_string(t.at("reject"), "tolerance.reject"), "tolerance.reject");
        if (t.contains("support"))
            job.tol_support = parse_decimal(expect_string(t.at("support"), "tolerance.support"),
                                            "tolerance.support");
        if (!(job.tol_member > 0) || !(job.tol_reject > 0) || !(job.tol_support > 0))
            throw ConfigError("config field 'tolerance': thresholds must be positive");
    }

    if (cfg.contains("degrees")) job.degrees = resolve_degrees(cfg.at("degrees"), "degrees");
    if (cfg.contains("k_list")) {
        job.k_list = to_int_vector(expect_string_array(cfg.at("k_list"), "k_list"), "k_list");
        for (int k : job.k_list)
            if (k < 0) throw ConfigError("config field 'k_list': degrees must be >= 0");
        if (job.k_list.empty()) throw ConfigError("config field 'k_list': must not be empty");
    }

    if (needs_fn) {
        if (!cfg.contains("function"))
            throw ConfigError("config field 'function': required (or give a builtin name)");
        job.fn = resolve_function(cfg);
        // Point-valued parameters need n; finish them here.
        const json& f = cfg.at("function");
        if (job.fn.name == "bump") {
            if (f.contains("center"))
                job.fn.center = to_point(expect_string_array(f.at("center"), "function.center"),
                                         job.n, "function.center");
            else
                job.fn.center.assign(static_cast<size_t>(job.n), {0.0, 0.0});
        }
        if (job.fn.name == "monomial") {
            if (static_cast<int>(job.fn.alpha.size()) != job.n ||
                static_cast<int>(job.fn.beta.size()) != job.n)
                throw ConfigError("config field 'function.alpha'/'function.beta': need " +
                                  std::to_string(job.n) + " entries each");
        }
    }

    if (command == "decompose") {
        if (!cfg.contains("poly"))
            throw ConfigError("config field 'poly': required (path to a polynomial file)");
        job.poly_file = expect_string(cfg.at("poly"), "poly");
    }

    if (command == "mean") {
        if (!cfg.contains("z")) throw ConfigError("config field 'z': required");
        job.z = to_point(expect_string_array(cfg.at("z"), "z"), job.n, "z");
        if (!cfg.contains("s")) throw ConfigError("config field 's': required");
        job.s = parse_decimal(expect_string(cfg.at("s"), "s"), "s");
        if (!(job.s > 0)) throw ConfigError("config field 's': must be positive");
        if (cfg.contains("kind")) {
            job.kind = expect_string(cfg.at("kind"), "kind");
            if (job.kind != "twisted" && job.kind != "left" && job.kind != "euclidean")
                throw ConfigError(
                    "config field 'kind': expected \"twisted\", \"left\", or \"euclidean\"");
        }
    }

    if (command == "verify") {
        if (cfg.contains("side")) {
            job.side = expect_string(cfg.at("side"), "side");
            if (job.side != "right" && job.side != "left")
                throw ConfigError("config field 'side': expected \"right\" or \"left\"");
        }
        if (cfg.contains("pairs")) {
            const json& p = expect_object(cfg.at("pairs"), "pairs");
            reject_unknown(p, "pairs", {"z_count", "s_per_z", "z_max", "s_span"}, "");
            if (p.contains("z_count"))
                job.pairs.z_count = static_cast<int>(parse_integer(
                    expect_string(p.at("z_count"), "pairs.z_count"), "pairs.z_count"));
            if (p.contains("s_per_z"))
                job.pairs.s_per_z = static_cast<int>(parse_integer(
                    expect_string(p.at("s_per_z"), "pairs.s_per_z"), "pairs.s_per_z"));
            if (p.contains("z_max"))
                job.pairs.z_max =
                    parse_decimal(expect_string(p.at("z_max"), "pairs.z_max"), "pairs.z_max");
            if (p.contains("s_span"))
                job.pairs.s_span =
                    parse_decimal(expect_string(p.at("s_span"), "pairs.s_span"), "pairs.s_span");
            if (job.pairs.z_count < 1 || job.pairs.s_per_z < 1)
                throw ConfigError("config field 'pairs': counts must be >= 1");
        }
        job.pairs.seed = job.seed;
    }

    if (command == "characterize") {
        job.mode = cfg.contains("mode") ? expect_string(cfg.at("mode"), "mode") : "one-sided";
        if (job.mode != "one-sided" && job.mode != "two-sided" && job.mode != "euclidean")
            throw ConfigError(
                "config field 'mode': expected \"one-sided\", \"two-sided\", or \"euclidean\"");
        if (job.mode == "euclidean") {
            if (!job.degrees.empty())
                throw ConfigError(
                    "config field 'degrees': euclidean mode takes 'k_list' (total degrees)");
            if (job.k_list.empty())
                throw ConfigError("config field 'k_list': required in euclidean mode");
        } else {
            if (!job.k_list.empty())
                throw ConfigError("config field 'k_list': only valid in euclidean mode");
            if (job.degrees.empty())
                throw ConfigError("config field 'degrees': required (list of [p, q] channels)");
        }
        job.pairs.seed = job.seed;
    }

    if (command == "basis") {
        if (job.degrees.empty())
            throw ConfigError("config field 'degrees': required (list of [p, q] spaces)");
    }

    if (command == "support") {
        job.mode = cfg.contains("mode") ? expect_string(cfg.at("mode"), "mode") : "twisted";
        if (job.mode != "twisted" && job.mode != "euclidean")
            throw ConfigError("config field 'mode': expected \"twisted\" or \"euclidean\"");
        if (cfg.contains("r_max")) {
            job.r_max = parse_decimal(expect_string(cfg.at("r_max"), "r_max"), "r_max");
            if (!(job.r_max > 0)) throw ConfigError("config field 'r_max': must be positive");
        }
        if (cfg.contains("support")) {
            const json& sp = expect_object(cfg.at("support"), "support");
            reject_unknown(sp, "support", {"r_step", "z_count", "z_max", "s_step", "s_reach"}, "");
            if (sp.contains("r_step"))
                job.support.r_step = parse_decimal(
                    expect_string(sp.at("r_step"), "support.r_step"), "support.r_step");
            if (sp.contains("z_count"))
                job.support.z_count = static_cast<int>(parse_integer(
                    expect_string(sp.at("z_count"), "support.z_count"), "support.z_count"));
            if (sp.contains("z_max"))
                job.support.z_max = parse_decimal(
                    expect_string(sp.at("z_max"), "support.z_max"), "support.z_max");
            if (sp.contains("s_step"))
                job.support.s_step = parse_decimal(
                    expect_string(sp.at("s_step"), "support.s_step"), "support.s_step");
            if (sp.contains("s_reach"))
                job.support.s_reach = parse_decimal(
                    expect_string(sp.at("s_reach"), "support.s_reach"), "support.s_reach");
        }
        job.support.seed = job.seed;
    }

    // Quadrature order defaults: circle rules are cheap, so n = 1 gets the
    // headroom the steep radial profiles need; support sweeps touch far more
    // spheres, so they default lower.
    if (job.order == 0) {
        if (command == "support")
            job.order = job.n == 1 ? 48 : 24;
        else
            job.order = job.n == 1 ? 64 : 40;
    }
    return job;
}

// ======================= builtin construction =======================

tsm::BuiltinFunction build_function(const Job& job) {
    const FunctionSpec& f = job.fn;
    if (f.name == "constant") return tsm::builtin_constant(job.n, f.value);
    if (f.name == "gaussian") return tsm::builtin_gaussian(job.n, f.sign, job.lambda);
    if (f.name == "bump") return tsm::builtin_bump(job.n, f.center, f.radius);
    if (f.name == "thm33") return tsm::builtin_thm33(job.n, f.p, f.q, f.i, f.j, job.lambda);
    if (f.name == "thm34") return tsm::builtin_thm34(job.n, f.p, f.q, f.k, f.j, job.lambda);
    if (f.name == "monomial")
        return tsm::builtin_monomial(job.n, tsm::MultiIndex(f.alpha.begin(), f.alpha.end()),
                                     tsm::MultiIndex(f.beta.begin(), f.beta.end()));
    if (f.name == "euclidean_model")
        return tsm::builtin_euclidean_model(job.n, f.p, f.q, f.m, f.j);
    if (f.name == "structured") {
        tsm::RadialProfile prof;
        try {
            prof = tsm::parse_profile(read_file(f.profile_file));
        } catch (const std::exception& e) {
            throw ConfigError("sampler file '" + f.profile_file + "': " + e.what());
        }
        tsm::BigradedPolynomial poly = tsm::BigradedPolynomial::zero(job.n);
        try {
            poly = tsm::parse_polynomial(read_file(f.poly_file), job.n);
        } catch (const std::exception& e) {
            throw ConfigError("sampler file '" + f.poly_file + "': " + e.what());
        }
        return tsm::builtin_structured(
            tsm::StructuredFunction::single(std::move(prof), std::move(poly)), job.lambda);
    }
    throw ConfigError("config field 'function.name': unknown builtin \"" + f.name + "\"");
}

// ======================= shared artifact helpers =======================

std::filesystem::path ensure_output_dir(const Job& job) {
    std::filesystem::path dir(job.output);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec && !std::filesystem::is_directory(dir))
        throw ConfigError("cannot create output directory '" + job.output + "'");
    return dir;
}

int verdict_exit(const std::string& verdict) {
    if (verdict == "member" || verdict == "consistent") return kExitClean;
    if (verdict == "non-member" || verdict == "inconsistent") return kExitNonMember;
    return kExitInconclusive;
}

std::vector<double> make_grid(const Job& job) {
    const tsm::AnnulusSpec ann{job.n, job.r, job.R};
    if (job.grid_placement == "chebyshev") return tsm::default_grid(ann, job.grid_count);
    tsm::validate_annulus(ann);
    double a, b;
    if (std::isinf(ann.R)) {
        a = ann.r + 0.2;
        b = ann.r + 4.2;
    } else {
        const double pad = 0.05 * (ann.R - ann.r);
        a = ann.r + pad;
        b = ann.R - pad;
    }
    std::vector<double> g(static_cast<size_t>(job.grid_count));
    for (int i = 0; i < job.grid_count; ++i)
        g[static_cast<size_t>(i)] =
            job.grid_count == 1 ? 0.5 * (a + b) : a + (b - a) * i / (job.grid_count - 1);
    return g;
}

// Per-channel coefficient tables named coeffs_{p}_{q}.csv, one per distinct
// (p, q) actually present in the report.
void write_channel_tables(const tsm::MembershipReport& rep, const std::filesystem::path& dir,
                          std::vector<std::string>& written) {
    std::vector<std::pair<int, int>> seen;
    for (const auto& prof : rep.profiles) {
        const std::pair<int, int> pq{prof.p, prof.q};
        if (std::find(seen.begin(), seen.end(), pq) == seen.end()) seen.push_back(pq);
    }
    for (const auto& [p, q] : seen) {
        const std::string name =
            "coeffs_" + std::to_string(p) + "_" + std::to_string(q) + ".csv";
        write_file(dir / name, tsm::report_channel_csv(rep, p, q));
        written.push_back(name);
    }
}

void announce(const std::filesystem::path& dir, const std::vector<std::string>& files) {
    std::cout << "artifacts:";
    for (const auto& f : files) std::cout << " " << (dir / f).string();
    std::cout << "\n";
}

// ======================= subcommand runners =======================

int run_basis(const Job& job) {
    const auto dir = ensure_output_dir(job);
    std::vector<std::string> files;
    json report;
    report["command"] = "basis";
    report["n"] = job.n;
    auto channels = json::array();
    for (const auto& [p, q] : job.degrees) {
        const auto basis = tsm::orthonormal_basis(job.n, p, q);
        const std::string name = "basis_" + std::to_string(p) + "_" + std::to_string(q) + ".txt";
        write_file(dir / name, tsm::format_basis(job.n, p, q, basis));
        files.push_back(name);
        json c;
        c["p"] = p;
        c["q"] = q;
        c["dimension"] = static_cast<long long>(basis.size());
        c["file"] = name;
        channels.push_back(std::move(c));
        std::cout << "H(" << p << "," << q << ") dimension " << basis.size() << " -> " << name
                  << "\n";
    }
    report["channels"] = std::move(channels);
    write_file(dir / "report.json", report.dump(2) + "\n");
    files.push_back("report.json");
    announce(dir, files);
    return kExitClean;
}

int run_decompose(const Job& job) {
    std::string text;
    try {
        text = read_file(job.poly_file);
    } catch (const ConfigError&) {
        throw;
    }
    tsm::BigradedPolynomial P = tsm::BigradedPolynomial::zero(std::max(1, job.n));
    try {
        P = tsm::parse_polynomial(text, job.n > 0 ? job.n : -1);
    } catch (const std::exception& e) {
        throw ConfigError("sampler file '" + job.poly_file + "': " + e.what());
    }
    const auto dir = ensure_output_dir(job);
    const auto bidg = tsm::bidegree(P);
    if (!bidg) throw ConfigError("decompose: input polynomial is not bihomogeneous");
    const auto layers = tsm::harmonic_decompose(P);

    // CSV: one row per monomial per layer; layer k carries the harmonic part
    // of bidegree (p - k, q - k), multiplied by |z|^(2k) in the identity.
    std::string csv = "layer,p,q,alpha,beta,coeff_re,coeff_im\n";
    json jlayers = json::array();
    for (size_t kk = 0; kk < layers.size(); ++kk) {
        const int lp = bidg->first - static_cast<int>(kk);
        const int lq = bidg->second - static_cast<int>(kk);
        int terms = 0;
        for (const auto& [key, coeff] : layers[kk].terms) {
            csv += std::to_string(kk) + "," + std::to_string(lp) + "," + std::to_string(lq) +
                   ",\"" + tsm::format_multi_index(key.first) + "\",\"" +
                   tsm::format_multi_index(key.second) + "\"," +
                   tsm::format_rational(coeff.re) + "," + tsm::format_rational(coeff.im) + "\n";
            ++terms;
        }
        json l;
        l["layer"] = static_cast<long long>(kk);
        l["p"] = lp;
        l["q"] = lq;
        l["terms"] = terms;
        jlayers.push_back(std::move(l));
        std::cout << "layer " << kk << ": bidegree (" << lp << "," << lq << "), " << terms
                  << " terms\n";
    }
    write_file(dir / "decompose.csv", csv);

    json report;
    report["command"] = "decompose";
    report["n"] = P.n;
    report["p"] = bidg->first;
    report["q"] = bidg->second;
    report["layers"] = std::move(jlayers);
    write_file(dir / "report.json", report.dump(2) + "\n");
    announce(dir, {"decompose.csv", "report.json"});
    return kExitClean;
}

int run_mean(const Job& job) {
    const auto fn = build_function(job);
    const tsm::SphereRule rule = tsm::build_sphere_rule(job.n, job.s, job.order);
    std::complex<double> value;
    if (job.kind == "twisted")
        value = tsm::twisted_mean(fn.sampler, job.z, rule, job.lambda);
    else if (job.kind == "left")
        value = tsm::left_twisted_mean(fn.sampler, job.z, rule, job.lambda);
    else
        value = tsm::euclidean_mean(fn.sampler, job.z, rule);

    const auto dir = ensure_output_dir(job);
    json report;
    report["command"] = "mean";
    report["n"] = job.n;
    report["kind"] = job.kind;
    if (job.kind != "euclidean") report["lambda"] = job.lambda;
    auto zarr = json::array();
    for (const auto& w : job.z) {
        zarr.push_back(w.real());
        zarr.push_back(w.imag());
    }
    report["z"] = std::move(zarr);
    report["s"] = job.s;
    report["order"] = job.order;
    report["function"] = fn.name;
    report["mean_re"] = value.real();
    report["mean_im"] = value.imag();
    write_file(dir / "report.json", report.dump(2) + "\n");

    std::string csv = "side";
    for (int j = 1; j <= job.n; ++j)
        csv += ",z" + std::to_string(j) + "_re,z" + std::to_string(j) + "_im";
    csv += ",s,mean_re,mean_im\n";
    csv += job.kind == "left" ? "left" : (job.kind == "euclidean" ? "euclidean" : "right");
    for (const auto& w : job.z)
        csv += "," + tsm::format_double(w.real()) + "," + tsm::format_double(w.imag());
    csv += "," + tsm::format_double(job.s) + "," + tsm::format_double(value.real()) + "," +
           tsm::format_double(value.imag()) + "\n";
    write_file(dir / "means.csv", csv);

    std::cout << "mean: " << tsm::format_double(value.real()) << " "
              << tsm::format_double(value.imag()) << "\n";
    announce(dir, {"report.json", "means.csv"});
    return kExitClean;
}

int run_verify(const Job& job, int threads) {
    const auto fn = build_function(job);
    const tsm::AnnulusSpec ann{job.n, job.r, job.R};
    const auto rep = tsm::membership_test(fn.sampler, ann, job.pairs, job.lambda, job.tol_member,
                                          job.order, threads, job.side == "left");
    const auto dir = ensure_output_dir(job);
    write_file(dir / "report.json", tsm::report_to_json(rep));
    write_file(dir / "means.csv", tsm::means_to_csv(rep));
    std::cout << "verdict: " << rep.verdict << "\n";
    std::cout << "max_mean_abs: " << tsm::format_double(rep.max_mean_abs)
              << " scale: " << tsm::format_double(rep.scale) << "\n";
    for (const auto& f : rep.flags) std::cout << "flag: " << f << "\n";
    announce(dir, {"report.json", "means.csv"});
    return verdict_exit(rep.verdict);
}

int run_characterize(const Job& job, int threads) {
    const auto fn = build_function(job);
    const tsm::AnnulusSpec ann{job.n, job.r, job.R};
    const auto grid = make_grid(job);
    const tsm::VerdictThresholds tol{job.tol_member, job.tol_reject};
    tsm::MembershipReport rep;
    if (job.mode == "two-sided")
        rep = tsm::two_sided_characterize(fn.sampler, ann, job.degrees, grid, job.order,
                                          job.lambda, job.pairs, tol, threads);
    else if (job.mode == "euclidean")
        rep = tsm::euclidean_characterize(fn.sampler, ann, job.k_list, grid, job.order, tol,
                                          threads);
    else
        rep = tsm::characterize(fn.sampler, ann, job.degrees, grid, job.order, job.lambda, tol,
                                threads);

    const auto dir = ensure_output_dir(job);
    std::vector<std::string> files = {"report.json", "means.csv"};
    write_file(dir / "report.json", tsm::report_to_json(rep));
    write_file(dir / "means.csv", tsm::means_to_csv(rep));
    write_channel_tables(rep, dir, files);
    std::cout << "verdict: " << rep.verdict << "\n";
    std::cout << "max_fit_residual: " << tsm::format_double(rep.max_fit_residual)
              << " scale: " << tsm::format_double(rep.scale) << "\n";
    if (job.mode == "two-sided")
        std::cout << "max_mean_abs: " << tsm::format_double(rep.max_mean_abs)
                  << " max_left_mean_abs: " << tsm::format_double(rep.max_left_mean_abs) << "\n";
    for (const auto& f : rep.flags) std::cout << "flag: " << f << "\n";
    announce(dir, files);
    return verdict_exit(rep.verdict);
}

int run_support(const Job& job, int threads) {
    const auto fn = build_function(job);
    const tsm::DecayInfo decay = fn.decay ? *fn.decay : tsm::DecayInfo{false, {}};
    tsm::SupportReport rep;
    if (job.mode == "euclidean")
        rep = tsm::helgason_support_check(fn.sampler, decay, job.r_max, job.support,
                                          job.tol_support, job.order, threads);
    else
        rep = tsm::support_radius(fn.sampler, decay, job.r_max, job.support, job.tol_support,
                                  job.order, job.lambda, threads);

    const auto dir = ensure_output_dir(job);
    write_file(dir / "report.json", tsm::report_to_json(rep));
    write_file(dir / "support.csv", tsm::support_to_csv(rep));
    if (rep.r_hat)
        std::cout << "r_hat: " << tsm::format_double(*rep.r_hat) << "\n";
    else
        std::cout << "r_hat: none (" << rep.message << ")\n";
    for (const auto& f : rep.flags) std::cout << "flag: " << f << "\n";
    announce(dir, {"report.json", "support.csv"});

    const bool flagged =
        std::find(rep.flags.begin(), rep.flags.end(), "decay hypothesis violated") !=
        rep.flags.end();
    if (rep.r_hat && !flagged) return kExitClean;
    return kExitInconclusive;
}

int run_selftest(const Job& job, int threads) {
    std::map<std::string, std::string> artifacts;
    const auto results = tsm::run_acceptance(threads, &artifacts);
    const auto dir = ensure_output_dir(job);
    std::vector<std::string> files;
    for (const auto& [name, content] : artifacts) {
        write_file(dir / name, content);
        files.push_back(name);
    }
    write_file(dir / "selftest_report.json", tsm::acceptance_report_json(results));
    files.push_back("selftest_report.json");
    for (const auto& r : results) {
        std::printf("[%s] criterion %2d: %s: %s (%.2fs)\n", r.pass ? "PASS" : "FAIL", r.id,
                    r.name.c_str(), r.detail.c_str(), r.seconds);
    }
    const bool ok = tsm::all_passed(results);
    std::cout << (ok ? "ALL CRITERIA PASSED" : "CRITERIA FAILED") << "\n";
    announce(dir, files);
    return ok ? kExitClean : kExitError;
}

// ======================= flag plumbing =======================

// Every flag mirrors one config field; values stay raw strings so the config
// resolver is the single validation path for both sources.
struct SubFlags {
    CLI::App* sub = nullptr;
    std::string config_path;
    std::string threads_text;  // flag/env only, never a config key
    std::map<std::string, std::string> slots;
    // path, option, kind: 0 scalar, 1 comma list, 2 degree list "p,q;p,q"
    std::vector<std::tuple<std::string, CLI::Option*, int>> regs;

    void add(const std::string& flag, const std::string& path, const std::string& help,
             int kind = 0) {
        auto& slot = slots[path];
        regs.emplace_back(path, sub->add_option(flag, slot, help), kind);
    }

    void add_common(bool with_function) {
        sub->add_option("--config", config_path, "JSON job file; overrides any flags");
        sub->add_option("--threads", threads_text,
                        "worker thread count (default: TSM_THREADS, then 1); never changes "
                        "output bytes");
        add("--output", "output", "artifact directory (default .)");
        add("--seed", "seed", "sampling seed");
        add("--n", "n", "complex dimension n");
        if (with_function) {
            sub->add_option("function", slots["function.name"],
                            "builtin name: constant, gaussian, bump, thm33, thm34, monomial, "
                            "euclidean_model, structured");
            regs.emplace_back("function.name", nullptr, 0);
            add("--p", "function.p", "bidegree p (thm33/thm34/euclidean_model)");
            add("--q", "function.q", "bidegree q (thm33/thm34/euclidean_model)");
            add("--i", "function.i", "profile index 1 <= i <= p (thm33)");
            add("--k", "function.k", "profile index 1 <= k <= q (thm34)");
            add("--j", "function.j", "harmonic basis index (default 0)");
            add("--m", "function.m", "radial power (euclidean_model)");
            add("--sign", "function.sign", "+1 or -1 (gaussian)");
            add("--value", "function.value", "re,im (constant)", 1);
            add("--center", "function.center", "re,im per coordinate (bump)", 1);
            add("--radius", "function.radius", "support radius (bump)");
            add("--alpha", "function.alpha", "holomorphic exponents, comma-separated (monomial)",
                1);
            add("--beta", "function.beta", "conjugate exponents, comma-separated (monomial)", 1);
            add("--profile", "function.profile", "radial profile file (structured)");
            add("--poly", "function.poly", "polynomial file (structured)");
            add("--lambda", "lambda", "twist parameter (default 1)");
            add("--order", "order", "quadrature order (default: auto)");
        }
    }

    json to_json() const {
        json cfg = json::object();
        for (const auto& [path, opt, kind] : regs) {
            const bool given = opt ? opt->count() > 0 : !slots.at(path).empty();
            if (!given) continue;
            const std::string& raw = slots.at(path);
            json value;
            if (kind == 1) {
                value = json::array();
                std::stringstream ss(raw);
                std::string item;
                while (std::getline(ss, item, ',')) value.push_back(item);
            } else if (kind == 2) {
                value = json::array();
                std::stringstream groups(raw);
                std::string group;
                while (std::getline(groups, group, ';')) {
                    json pair = json::array();
                    std::stringstream ss(group);
                    std::string item;
                    while (std::getline(ss, item, ',')) pair.push_back(item);
                    value.push_back(std::move(pair));
                }
            } else {
                value = raw;
            }
            // Nested path a.b -> cfg["a"]["b"].
            json* where = &cfg;
            std::string rest = path;
            size_t dot;
            while ((dot = rest.find('.')) != std::string::npos) {
                where = &(*where)[rest.substr(0, dot)];
                if (!where->is_object()) *where = json::object();
                rest = rest.substr(dot + 1);
            }
            (*where)[rest] = std::move(value);
        }
        return cfg;
    }
};

int resolve_thread_flag(const std::string& text) {
    if (text.empty()) return tsm::resolve_threads(0);
    const int v = static_cast<int>(parse_integer(text, "--threads"));
    if (v < 1) throw ConfigError("--threads: must be >= 1");
    return tsm::resolve_threads(v);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Verification toolkit for twisted spherical means: harmonic bases, quadrature "
        "means, membership and characterization checks, support-radius estimation."};
    app.require_subcommand(1);

    std::map<std::string, SubFlags> flags;
    const auto make_sub = [&](const char* name, const char* desc, bool with_fn) -> SubFlags& {
        SubFlags& f = flags[name];
        f.sub = app.add_subcommand(name, desc);
        f.add_common(with_fn);
        return f;
    };

    {
        SubFlags& f = make_sub("basis", "emit orthonormal bigraded harmonic bases", false);
        f.add("--degrees", "degrees", "channels as p,q;p,q;... (e.g. \"1,0;1,1\")", 2);
    }
    {
        SubFlags& f = make_sub("decompose", "split a polynomial file into harmonic layers", false);
        f.add("--poly", "poly", "input polynomial file: lines '(a|b) re im'");
    }
    {
        SubFlags& f = make_sub("mean", "evaluate one spherical mean", true);
        f.add("--z", "z", "center, re,im per coordinate", 1);
        f.add("--s", "s", "sphere radius");
        f.add("--kind", "kind", "twisted | left | euclidean (default twisted)");
    }
    {
        SubFlags& f = make_sub("verify", "direct membership check by sampled means", true);
        f.add("--r", "annulus.r", "inner annulus radius");
        f.add("--R", "annulus.R", "outer annulus radius or inf (default inf)");
        f.add("--side", "side", "right | left (default right)");
        f.add("--z-count", "pairs.z_count", "number of sphere centers (default 20)");
        f.add("--s-per-z", "pairs.s_per_z", "radii per center (default 5)");
        f.add("--z-max", "pairs.z_max", "center radius cap (default: auto)");
        f.add("--s-span", "pairs.s_span", "admissible radius window (default 4)");
        f.add("--tol-member", "tolerance.member", "consistency threshold (default 1e-8)");
    }
    {
        SubFlags& f = make_sub("characterize", "coefficient fits against exterior bases", true);
        f.add("--r", "annulus.r", "inner annulus radius");
        f.add("--R", "annulus.R", "outer annulus radius or inf (default inf)");
        f.add("--mode", "mode", "one-sided | two-sided | euclidean (default one-sided)");
        f.add("--degrees", "degrees", "channels as p,q;p,q;...", 2);
        f.add("--k-list", "k_list", "total degrees, comma-separated (euclidean mode)", 1);
        f.add("--grid-count", "grid.count", "radial grid size (default 24)");
        f.add("--grid-placement", "grid.placement", "chebyshev | uniform (default chebyshev)");
        f.add("--tol-member", "tolerance.member", "member threshold (default 1e-8)");
        f.add("--tol-reject", "tolerance.reject", "rejection threshold (default 1e-4)");
    }
    {
        SubFlags& f = make_sub("support", "support-radius estimation from vanishing means", true);
        f.add("--mode", "mode", "twisted | euclidean (default twisted)");
        f.add("--r-max", "r_max", "largest candidate radius (default 2)");
        f.add("--r-step", "support.r_step", "candidate radius step (default 0.05)");
        f.add("--z-count", "support.z_count", "centers per radius (default 9)");
        f.add("--z-max", "support.z_max", "center radius cap (default 0.75)");
        f.add("--s-step", "support.s_step", "sphere radius step (default 0.025)");
        f.add("--s-reach", "support.s_reach", "extra sphere reach (default 1.5)");
        f.add("--tol-support", "tolerance.support", "vanishing threshold (default 1e-6)");
    }
    {
        make_sub("selftest", "run the full acceptance suite and save its artifacts", false);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitError;
    }

    try {
        for (auto& [name, f] : flags) {
            if (!f.sub->parsed()) continue;
            json cfg = f.to_json();
            if (!f.config_path.empty()) {
                const std::string text = read_file(f.config_path);
                const json file_cfg = parse_config_text(text, "config file '" + f.config_path + "'");
                if (!file_cfg.is_object())
                    throw ConfigError("config file '" + f.config_path +
                                      "': top level must be a JSON object");
                overlay(cfg, file_cfg);
            }
            const Job job = resolve_job(cfg, name);
            const int threads = resolve_thread_flag(f.threads_text);
            if (name == "basis") return run_basis(job);
            if (name == "decompose") return run_decompose(job);
            if (name == "mean") return run_mean(job);
            if (name == "verify") return run_verify(job, threads);
            if (name == "characterize") return run_characterize(job, threads);
            if (name == "support") return run_support(job, threads);
            if (name == "selftest") return run_selftest(job, threads);
        }
        std::cerr << "error: no subcommand\n";
        return kExitError;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
}
