#pragma once

#include "dendro/dynamics.hpp"

#include <filesystem>
#include <memory>
#include <string>

namespace dendro {

// JSON text formats.
//   dendrite: { "vertices": n, "edges": [[u, v, length], ...] }
//   map:      { "dendrite": <path or inline object>,
//               "vertex_images": { "v": point-spec, ... } (or an array),
//               "subdivisions": [[edge, t, point-spec], ...] }
//   point-spec: [vertex] or [edge, t]
// Malformed input raises ConfigError; geometric violations raise DomainError.

std::shared_ptr<const Dendrite> parse_dendrite(const std::string& text);
std::shared_ptr<const Dendrite> load_dendrite(const std::filesystem::path& file);
std::string dendrite_to_json(const Dendrite& X);

// Relative "dendrite" paths resolve against base_dir.
DendriteMap parse_map(const std::string& text, const std::filesystem::path& base_dir = {});
DendriteMap load_map(const std::filesystem::path& file);
std::string map_to_json(const DendriteMap& f);

DPoint parse_point(const Dendrite& X, const std::string& spec);
std::string point_to_json(const DPoint& p);

std::string read_text(const std::filesystem::path& file);

} // namespace dendro
