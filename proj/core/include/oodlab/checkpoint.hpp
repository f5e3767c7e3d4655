#pragma once

#include <string>

#include "oodlab/model.hpp"

namespace oodlab {

// Versioned plain-text checkpoint. Layout:
//
//   oodlab-checkpoint 1
//   head <softmax|isomax>
//   num_classes <C>
//   entropic_scale <E_s>          (isomax only)
//   in_dim <d>
//   feature_dim <F>
//   num_layers <L>
//   layer <index> <relu|identity> <in> <out>   (L lines)
//   tensor <name> <rank> <dims...>
//   <row-major values, one line per leading row, 17 significant digits>
//
// 17 significant decimal digits round-trip IEEE doubles bit-exactly, so
// save followed by load reproduces every parameter.
void save_checkpoint(const Model& model, const std::string& path);
Model load_checkpoint(const std::string& path);

}  // namespace oodlab
