#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "activesense/scene.hpp"

namespace activesense {

// Scene file schema:
//   { "n_rows": int, "n_cols": int, "cell_size": float,
//     "origin": [x, y]            (optional, default [0, 0]),
//     "num_classes": int,
//     "objects": [ { "cells": [[row, col], ...], "class": int }, ... ] }
nlohmann::json scene_to_json(const Scene& scene);
Scene scene_from_json(const nlohmann::json& j);

Scene load_scene(const std::filesystem::path& path);
void save_scene(const Scene& scene, const std::filesystem::path& path);

}  // namespace activesense
