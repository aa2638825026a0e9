#pragma once

#include <vector>

#include "core/events.hpp"
#include "core/types.hpp"

namespace evrecon::warp {

// Result of splatting one plane: normalized values plus the raw accumulated
// weight per target pixel (zero marks a hole).
struct Splat {
  Image values;
  Image weights;
};

// Forward (scatter) warp: every source pixel is splatted to (x + u, y + v)
// with bilinear weights; targets are normalized by their accumulated weight
// and holes copy the unwarped source. No clamping.
Splat splat_plane(const Image& source, const FlowField& flow);

// Frame variant: clamped to [0, 1].
Image forward_warp_frame(const Image& frame, const FlowField& flow);

// Per-channel forward warp of a code tensor sharing one weight buffer; holes
// keep the unwarped codes, no clamping.
Tensor forward_warp_codes(const Tensor& codes, const FlowField& flow);

// 2x bilinear downsample (cell-centre sampling, i.e. 2x2 averaging) with the
// vectors halved. Odd sizes are padded by replication.
FlowField downsample_flow(const FlowField& flow);

// 2x bilinear downsample of a scalar map without rescaling values.
Image downsample_image(const Image& img);

// Events moved to t_ref along the flow, read as total displacement over the
// stream window, and splatted bilinearly with their signed polarity.
Image warp_events(const EventStream& events, const FlowField& flow, double t_ref);

// Population variance.
double image_variance(const Image& img);

// Forward warping loss: variance of the flow-warped event image over the
// variance of the unwarped one.
double fwl(const EventStream& events, const FlowField& flow, double t_ref);

}  // namespace evrecon::warp
