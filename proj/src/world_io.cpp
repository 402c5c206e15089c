#include "lcx/world_io.hpp"

#include <fstream>
#include <sstream>

namespace lcx {

using ojson = nlohmann::ordered_json;

WorldDescription WorldDescription::from_world(const World& world, std::uint64_t seed) {
    WorldDescription d;
    d.width = world.config().width;
    d.height = world.config().height;
    d.obstacles = world.obstacles();
    d.landmarks = world.landmarks();
    d.seed = seed;
    return d;
}

World WorldDescription::to_world(WorldConfig base) const {
    base.width = width;
    base.height = height;
    base.rng_seed = seed;
    return World(base, obstacles, landmarks);
}

ojson to_json(const WorldDescription& desc) {
    ojson j;
    j["width"] = desc.width;
    j["height"] = desc.height;
    j["obstacles"] = ojson::array();
    for (const Obstacle& o : desc.obstacles) {
        j["obstacles"].push_back({{"x", o.x}, {"y", o.y}, {"w", o.w}, {"h", o.h}});
    }
    j["landmarks"] = ojson::array();
    for (const LandmarkInstance& l : desc.landmarks) {
        j["landmarks"].push_back(
            {{"id", l.id}, {"x", l.position.x}, {"y", l.position.y}, {"destroyed", l.destroyed}});
    }
    j["seed"] = desc.seed;
    return j;
}

WorldDescription world_description_from_json(const ojson& j) {
    try {
        WorldDescription d;
        d.width = j.at("width").get<double>();
        d.height = j.at("height").get<double>();
        for (const auto& o : j.at("obstacles")) {
            d.obstacles.push_back({o.at("x").get<double>(), o.at("y").get<double>(),
                                   o.at("w").get<double>(), o.at("h").get<double>()});
        }
        for (const auto& l : j.at("landmarks")) {
            d.landmarks.push_back({l.at("id").get<LandmarkId>(),
                                   {l.at("x").get<double>(), l.at("y").get<double>()},
                                   l.at("destroyed").get<bool>()});
        }
        d.seed = j.value("seed", std::uint64_t{0});
        return d;
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::Io, std::string("bad world description: ") + e.what());
    }
}

std::string dump_world(const WorldDescription& desc) { return to_json(desc).dump(2) + "\n"; }

WorldDescription parse_world(const std::string& text) {
    try {
        return world_description_from_json(ojson::parse(text));
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(Errc::Io, std::string("world file is not JSON: ") + e.what());
    }
}

WorldDescription load_world_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::Io, "cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_world(buf.str());
}

void save_world_file(const std::string& path, const WorldDescription& desc) {
    std::ofstream out(path);
    if (!out) throw Error(Errc::Io, "cannot write " + path);
    out << dump_world(desc);
}

}  // namespace lcx
