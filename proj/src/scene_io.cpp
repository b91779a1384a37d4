#include "activesense/scene_io.hpp"

#include <fstream>
#include <stdexcept>

namespace activesense {

nlohmann::json scene_to_json(const Scene& scene) {
  const GridGeometry& g = scene.geometry();
  nlohmann::json objects = nlohmann::json::array();
  for (const SceneObject& obj : scene.objects()) {
    nlohmann::json cells = nlohmann::json::array();
    for (const CellCoord& c : obj.cells) {
      cells.push_back({c.row, c.col});
    }
    objects.push_back({{"cells", cells}, {"class", obj.label}});
  }
  return {{"n_rows", g.n_rows()},
          {"n_cols", g.n_cols()},
          {"cell_size", g.cell_size()},
          {"origin", {g.origin().x, g.origin().y}},
          {"num_classes", scene.num_classes()},
          {"objects", objects}};
}

Scene scene_from_json(const nlohmann::json& j) {
  try {
    Point2 origin{};
    if (j.contains("origin")) {
      origin = {j.at("origin").at(0).get<double>(), j.at("origin").at(1).get<double>()};
    }
    GridGeometry g(j.at("n_rows").get<std::size_t>(), j.at("n_cols").get<std::size_t>(),
                   j.at("cell_size").get<double>(), origin);
    std::vector<SceneObject> objects;
    for (const auto& o : j.value("objects", nlohmann::json::array())) {
      SceneObject obj;
      obj.label = o.at("class").get<int>();
      for (const auto& c : o.at("cells")) {
        obj.cells.push_back({c.at(0).get<std::size_t>(), c.at(1).get<std::size_t>()});
      }
      objects.push_back(std::move(obj));
    }
    return Scene(g, j.at("num_classes").get<int>(), std::move(objects));
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("scene: malformed JSON: ") + e.what());
  }
}

Scene load_scene(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("scene: cannot open " + path.string());
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error("scene: " + path.string() + ": " + e.what());
  }
  return scene_from_json(j);
}

void save_scene(const Scene& scene, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("scene: cannot write " + path.string());
  }
  out << scene_to_json(scene).dump(2) << '\n';
}

}  // namespace activesense
