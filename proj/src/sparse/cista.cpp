#include "sparse/cista.hpp"

#include "sparse/cista_impl.hpp"

namespace evrecon::sparse {

CistaState zero_state(const CistaArch& arch, int height, int width) {
  require(height % 2 == 0 && width % 2 == 0, ErrorKind::dimension, "frame dimensions must be even");
  return {Tensor(arch.codes, height / 2, width / 2), Tensor(arch.lsrc_channels, height, width),
          Tensor(arch.codes, height / 2, width / 2)};
}

ForwardResult cista_forward(const encode::VoxelGrid& events, const Image& frame_warped,
                            const Tensor& codes_warped, const CistaState& previous,
                            const CistaWeights& weights, const ForwardOptions& options) {
  auto r = cista_forward_t<double>(events.data, stack_image(frame_warped), codes_warped, previous, weights,
                                   options);
  return {std::move(r.features), channel_image(r.frame_raw, 0), channel_image(r.frame, 0),
          std::move(r.state)};
}

}  // namespace evrecon::sparse
