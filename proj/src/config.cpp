#include "hslab/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace hslab {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path + ": " + what);
}

double number_at(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    double v = j.get<double>();
    if (!std::isfinite(v)) fail(path, "number is not finite");
    return v;
}

int int_at(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<int>();
}

std::vector<double> number_list(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (size_t i = 0; i < j.size(); ++i)
        out.push_back(number_at(j[i], path + "." + std::to_string(i)));
    return out;
}

std::vector<std::vector<double>> number_table(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of rows");
    std::vector<std::vector<double>> out;
    out.reserve(j.size());
    for (size_t i = 0; i < j.size(); ++i)
        out.push_back(number_list(j[i], path + "." + std::to_string(i)));
    return out;
}

void expect_keys(const json& j, const std::string& path,
                 std::initializer_list<const char*> keys) {
    if (!j.is_object()) fail(path, "expected an object");
    for (const char* k : keys)
        if (!j.contains(k)) fail(path + "." + k, "missing required key");
    for (const auto& [k, v] : j.items()) {
        bool known = false;
        for (const char* want : keys) known = known || k == want;
        if (!known) fail(path + "." + k, "unknown key");
    }
}

DifferentialOperator from_coeffs(const json& j) {
    if (!j.is_object()) fail("$.coeffs", "expected an object");
    if (j.empty()) fail("$.coeffs", "needs at least one derivative order");
    std::map<int, RealPolynomial> terms;
    for (const auto& [key, value] : j.items()) {
        const std::string path = "$.coeffs." + key;
        int order = -1;
        try {
            size_t used = 0;
            order = std::stoi(key, &used);
            if (used != key.size()) order = -1;
        } catch (const std::exception&) {
            order = -1;
        }
        if (order < 0) fail(path, "key must be a non-negative derivative order");
        terms.emplace(order, RealPolynomial(number_list(value, path)));
    }
    try {
        return DifferentialOperator(std::move(terms));
    } catch (const std::exception& e) {
        fail("$.coeffs", e.what());
    }
}

DifferentialOperator from_classical(const json& j) {
    expect_keys(j, "$.classical", {"alphas", "gammas"});
    std::vector<double> alphas = number_list(j["alphas"], "$.classical.alphas");
    std::vector<double> gammas = number_list(j["gammas"], "$.classical.gammas");
    try {
        return classical_operator(alphas, gammas);
    } catch (const Error& e) {
        fail("$.classical", e.what());
    }
}

DifferentialOperator from_sandwich(const json& j) {
    expect_keys(j, "$.sandwich", {"p_roots", "p_leading", "m", "n"});
    std::vector<double> roots = number_list(j["p_roots"], "$.sandwich.p_roots");
    double leading = number_at(j["p_leading"], "$.sandwich.p_leading");
    if (leading == 0.0) fail("$.sandwich.p_leading", "must be nonzero");
    int m = int_at(j["m"], "$.sandwich.m");
    int n = int_at(j["n"], "$.sandwich.n");
    try {
        return sandwich_operator(from_roots(roots, leading), m, n);
    } catch (const std::exception& e) {
        fail("$.sandwich", e.what());
    }
}

DifferentialOperator from_pencil(const json& j) {
    expect_keys(j, "$.pencil", {"a", "b", "c"});
    auto a = number_table(j["a"], "$.pencil.a");
    auto b = number_table(j["b"], "$.pencil.b");
    auto c = number_table(j["c"], "$.pencil.c");
    try {
        return pencil_operator(a, b, c);
    } catch (const std::exception& e) {
        fail("$.pencil", e.what());
    }
}

}  // namespace

DifferentialOperator operator_from_json_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || doc.size() != 1)
        throw ConfigError(
            "$: config must contain exactly one of "
            "\"coeffs\", \"classical\", \"sandwich\", \"pencil\"");
    const std::string key = doc.begin().key();
    const json& body = doc.begin().value();
    if (key == "coeffs") return from_coeffs(body);
    if (key == "classical") return from_classical(body);
    if (key == "sandwich") return from_sandwich(body);
    if (key == "pencil") return from_pencil(body);
    throw ConfigError("$." + key + ": unknown operator kind");
}

DifferentialOperator load_operator_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return operator_from_json_text(buf.str());
}

}  // namespace hslab
