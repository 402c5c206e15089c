#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "lcx/world.hpp"

namespace lcx {

/// Contents of a world description file:
/// {"width","height","obstacles":[{"x","y","w","h"}],"landmarks":[{"id","x","y","destroyed"}],"seed"}
struct WorldDescription {
    double width = 200.0;
    double height = 200.0;
    std::vector<Obstacle> obstacles;
    std::vector<LandmarkInstance> landmarks;
    std::uint64_t seed = 0;

    static WorldDescription from_world(const World& world, std::uint64_t seed);

    /// Builds a world using `base` for everything the file does not carry.
    World to_world(WorldConfig base = {}) const;
};

nlohmann::ordered_json to_json(const WorldDescription& desc);
WorldDescription world_description_from_json(const nlohmann::ordered_json& j);

std::string dump_world(const WorldDescription& desc);
WorldDescription parse_world(const std::string& text);

WorldDescription load_world_file(const std::string& path);
void save_world_file(const std::string& path, const WorldDescription& desc);

}  // namespace lcx
