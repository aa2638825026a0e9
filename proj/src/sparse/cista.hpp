#pragma once

#include "core/types.hpp"
#include "encode/voxel.hpp"
#include "sparse/weights.hpp"

namespace evrecon::sparse {

// Recurrent state carried between reconstructions: codes Z (C x H/2 x W/2),
// LSRC state a (A x H x W), LSTC state c (C x H/2 x W/2).
template <typename T>
struct CistaStateT {
  Tensor3<T> codes;
  Tensor3<T> a;
  Tensor3<T> c;
};
using CistaState = CistaStateT<double>;

CistaState zero_state(const CistaArch& arch, int height, int width);

enum class ThresholdMode {
  exact,
  // softplus(beta (v - theta)) / beta - softplus(beta (-v - theta)) / beta;
  // differentiable stand-in used for derivative checks.
  smooth,
};

struct ForwardOptions {
  ThresholdMode threshold = ThresholdMode::exact;
  double smooth_sharpness = 50.0;
};

template <typename T>
struct ForwardResultT {
  Tensor3<T> features;   // X_t
  Tensor3<T> frame_raw;  // synthesis before clamping
  Tensor3<T> frame;      // clamped to [0, 1]
  CistaStateT<T> state;
};

struct ForwardResult {
  Tensor features;
  Image frame_raw;
  Image frame;
  CistaState state;
};

// One reconstruction step: fuse events and the warped previous frame into
// X_t, initialise codes through the LSTC gate from the warped previous codes,
// refine with the unfolded ISTA blocks and synthesize through the LSRC.
ForwardResult cista_forward(const encode::VoxelGrid& events, const Image& frame_warped,
                            const Tensor& codes_warped, const CistaState& previous,
                            const CistaWeights& weights, const ForwardOptions& options = {});

}  // namespace evrecon::sparse
