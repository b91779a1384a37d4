#pragma once

#include <cstddef>
#include <vector>

#include "activesense/grid.hpp"

namespace activesense {

struct SceneObject {
  std::vector<CellCoord> cells;
  int label = 1;  // class label in [1, L]
};

// Ground truth: which cells are occupied and by which class.
class Scene {
 public:
  Scene(GridGeometry geometry, int num_classes, std::vector<SceneObject> objects = {});

  const GridGeometry& geometry() const { return geometry_; }
  int num_classes() const { return num_classes_; }
  const std::vector<SceneObject>& objects() const { return objects_; }

  bool occupied(std::size_t cell) const { return class_of_[cell] != 0; }
  // 0 for empty cells, otherwise the class label.
  int class_of(std::size_t cell) const { return class_of_[cell]; }
  std::size_t occupied_count() const;

 private:
  GridGeometry geometry_;
  int num_classes_;
  std::vector<SceneObject> objects_;
  std::vector<int> class_of_;
};

}  // namespace activesense
