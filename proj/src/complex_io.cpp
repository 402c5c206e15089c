#include "lcx/complex_io.hpp"

#include <istream>
#include <ostream>
#include <string>

namespace lcx {

ojson record_to_json(const InsertionRecord& r) {
    ojson j;
    j["v"] = r.version;
    j["s"] = ojson::array();
    for (LandmarkId id : r.simplex.vertices()) j["s"].push_back(id);
    j["a"] = r.source_agent;
    j["o"] = r.observation_index;
    return j;
}

InsertionRecord record_from_json(const ojson& j) {
    try {
        InsertionRecord r;
        r.version = j.at("v").get<std::uint64_t>();
        r.simplex = Simplex(j.at("s").get<std::vector<LandmarkId>>());
        r.source_agent = j.at("a").get<AgentIndex>();
        r.observation_index = j.at("o").get<std::uint64_t>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::Protocol, std::string("bad insertion record: ") + e.what());
    }
}

void write_log(std::ostream& out, const LandmarkComplex& complex) {
    for (const auto& r : complex.log()) out << record_to_json(r).dump() << '\n';
}

LandmarkComplex read_log(std::istream& in, int max_dim) {
    LandmarkComplex complex(max_dim);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ojson j;
        try {
            j = ojson::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw Error(Errc::Io, std::string("log line is not JSON: ") + e.what());
        }
        complex.apply(record_from_json(j));
    }
    return complex;
}

}  // namespace lcx
