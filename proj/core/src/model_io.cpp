#include "renewal/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace renewal {

namespace {

using nlohmann::json;

double num_field(const json& params, const char* name) {
    if (!params.contains(name) || !params[name].is_number())
        throw ModelError(std::string("model file: missing numeric param \"") + name + "\"");
    return params[name].get<double>();
}

int int_field(const json& params, const char* name) {
    if (!params.contains(name) || !params[name].is_number_integer())
        throw ModelError(std::string("model file: missing integer param \"") + name + "\"");
    return params[name].get<int>();
}

std::vector<double> vec_field(const json& params, const char* name) {
    if (!params.contains(name) || !params[name].is_array())
        throw ModelError(std::string("model file: missing array param \"") + name + "\"");
    return params[name].get<std::vector<double>>();
}

} // namespace

Distribution parse_model_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ModelError(std::string("model file: invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string())
        throw ModelError("model file: expected an object with a string \"kind\"");
    const std::string kind = doc["kind"].get<std::string>();
    const json params = doc.contains("params") ? doc["params"] : json::object();

    Distribution model = [&]() -> Distribution {
        if (kind == "exponential") return Distribution::exponential(num_field(params, "rate"));
        if (kind == "erlang")
            return Distribution::erlang(int_field(params, "shape"), num_field(params, "rate"));
        if (kind == "hyperexponential")
            return Distribution::hyperexponential(vec_field(params, "weights"),
                                                  vec_field(params, "rates"));
        if (kind == "matrix_exponential") {
            if (!params.contains("T") || !params["T"].is_array())
                throw ModelError("model file: matrix_exponential needs params.T (array of rows)");
            std::vector<std::vector<double>> t;
            for (const auto& row : params["T"]) t.push_back(row.get<std::vector<double>>());
            return Distribution::matrix_exponential(vec_field(params, "alpha"), std::move(t));
        }
        if (kind == "uniform01") return Distribution::uniform01();
        if (kind == "truncated_exponential")
            return Distribution::truncated_exponential(num_field(params, "rate"),
                                                       num_field(params, "priority"));
        if (kind == "discrete_pmf") return Distribution::discrete_pmf(vec_field(params, "pmf"));
        if (kind == "geometric") return Distribution::geometric(num_field(params, "p"));
        if (kind == "negative_binomial")
            return Distribution::negative_binomial(num_field(params, "p"), int_field(params, "n"));
        throw ModelError("model file: unknown kind \"" + kind + "\"");
    }();

    if (doc.contains("lattice")) {
        if (!doc["lattice"].is_boolean()) throw ModelError("model file: \"lattice\" must be a bool");
        if (doc["lattice"].get<bool>() != model.lattice())
            throw ModelError("model file: \"lattice\" flag contradicts kind \"" + kind + "\"");
    }
    return model;
}

Distribution load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelError("cannot open model file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model_json(buf.str());
}

} // namespace renewal
