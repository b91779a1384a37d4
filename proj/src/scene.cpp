#include "activesense/scene.hpp"

#include <stdexcept>

namespace activesense {

Scene::Scene(GridGeometry geometry, int num_classes, std::vector<SceneObject> objects)
    : geometry_(geometry),
      num_classes_(num_classes),
      objects_(std::move(objects)),
      class_of_(geometry.size(), 0) {
  if (num_classes < 1) {
    throw std::invalid_argument("Scene: num_classes must be >= 1");
  }
  for (const SceneObject& obj : objects_) {
    if (obj.label < 1 || obj.label > num_classes) {
      throw std::invalid_argument("Scene: object class outside [1, num_classes]");
    }
    for (const CellCoord& c : obj.cells) {
      const std::size_t idx = geometry_.index(c);
      if (class_of_[idx] != 0) {
        throw std::invalid_argument("Scene: cell claimed by two objects");
      }
      class_of_[idx] = obj.label;
    }
  }
}

std::size_t Scene::occupied_count() const {
  std::size_t n = 0;
  for (int c : class_of_) {
    n += c != 0 ? 1 : 0;
  }
  return n;
}

}  // namespace activesense
