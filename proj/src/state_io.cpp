#include "mixloci/state_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mixloci {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& what) { throw Error(ErrorCode::InvalidInput, what); }

std::size_t dimension_field(const json& doc, const char* key)
{
    if (!doc.contains(key)) schema_error(std::string("missing \"") + key + "\"");
    const json& v = doc.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 1) schema_error(std::string("\"") + key + "\" must be an integer >= 1");
    return v.get<std::size_t>();
}

cplx complex_from_json(const json& z)
{
    if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number())
        schema_error("complex numbers must be [re, im] pairs of numbers");
    return {z[0].get<double>(), z[1].get<double>()};
}

Ensemble parse_ensemble(const json& arr, BipartiteShape shape, bool normalize)
{
    if (!arr.is_array() || arr.empty()) schema_error("\"ensemble\" must be a nonempty array");
    std::vector<double> weights;
    std::vector<CVector> vectors;
    for (const json& member : arr) {
        if (!member.is_object() || !member.contains("p") || !member.contains("amps"))
            schema_error("ensemble members need \"p\" and \"amps\"");
        if (!member.at("p").is_number()) schema_error("\"p\" must be a number");
        const double p = member.at("p").get<double>();
        if (!(p > 0.0) || !std::isfinite(p)) schema_error("\"p\" must be positive");
        CVector amps = vector_from_json(member.at("amps"));
        if (amps.size() != shape.dim())
            schema_error("\"amps\" has " + std::to_string(amps.size()) + " entries, expected " +
                         std::to_string(shape.dim()));
        if (!normalize && std::abs(norm2(amps) - 1.0) > 1e-12) schema_error("amplitudes are not unit norm");
        weights.push_back(p);
        vectors.push_back(std::move(amps));
    }
    if (!normalize) {
        double total = 0.0;
        for (double w : weights) total += w;
        if (std::abs(total - 1.0) > 1e-10) schema_error("weights do not sum to 1");
    }
    return Ensemble::from_vectors(shape, weights, vectors);
}

DensityMatrix parse_matrix(const json& arr, BipartiteShape shape, bool normalize)
{
    const std::size_t d = shape.dim();
    if (!arr.is_array() || arr.size() != d * d)
        schema_error("\"matrix\" must hold " + std::to_string(d * d) + " [re, im] entries");
    std::vector<cplx> entries;
    entries.reserve(d * d);
    for (const json& z : arr) entries.push_back(complex_from_json(z));
    return DensityMatrix::from_matrix(shape, ComplexMatrix(d, d, std::move(entries)), normalize);
}

} // namespace

DensityMatrix StateDocument::density() const
{
    if (const auto* e = std::get_if<Ensemble>(&content)) return density_from_ensemble(*e);
    return std::get<DensityMatrix>(content);
}

StateDocument parse_state(const json& doc)
{
    if (!doc.is_object()) schema_error("state file must be a JSON object");
    const BipartiteShape shape{dimension_field(doc, "m"), dimension_field(doc, "n")};
    bool normalize = true;
    if (doc.contains("normalize")) {
        if (!doc.at("normalize").is_boolean()) schema_error("\"normalize\" must be a boolean");
        normalize = doc.at("normalize").get<bool>();
    }
    const bool has_ensemble = doc.contains("ensemble");
    const bool has_matrix = doc.contains("matrix");
    if (has_ensemble == has_matrix) schema_error("exactly one of \"ensemble\" or \"matrix\" is required");

    if (has_ensemble) return StateDocument{shape, parse_ensemble(doc.at("ensemble"), shape, normalize), normalize};
    return StateDocument{shape, parse_matrix(doc.at("matrix"), shape, normalize), normalize};
}

StateDocument load_state(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) schema_error("cannot open state file " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        schema_error("malformed JSON in " + path.string() + ": " + e.what());
    }
    return parse_state(doc);
}

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json vector_to_json(std::span<const cplx> v)
{
    json arr = json::array();
    for (const auto& z : v) arr.push_back(complex_to_json(z));
    return arr;
}

json point_to_json(const ProjectivePoint& p) { return vector_to_json(p.coords()); }

CVector vector_from_json(const json& arr)
{
    if (!arr.is_array()) schema_error("expected an array of [re, im] pairs");
    CVector v;
    v.reserve(arr.size());
    for (const json& z : arr) v.push_back(complex_from_json(z));
    return v;
}

json to_json(const Ensemble& e)
{
    json members = json::array();
    for (const auto& mem : e.members())
        members.push_back({{"p", mem.weight}, {"amps", vector_to_json(mem.state.amplitudes())}});
    return {{"m", e.shape().m}, {"n", e.shape().n}, {"ensemble", members}};
}

json to_json(const DensityMatrix& rho)
{
    return {{"m", rho.shape().m}, {"n", rho.shape().n}, {"matrix", vector_to_json(rho.matrix().entries())}};
}

json to_json(const StateDocument& doc)
{
    return std::visit([](const auto& c) { return to_json(c); }, doc.content);
}

std::string content_digest(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace mixloci
