#pragma once

#include "zup/flow.hpp"
#include "zup/image.hpp"

namespace zup {

/// output(p) = image sampled bilinearly at p + flow(p), replicate borders.
[[nodiscard]] Image backward_warp(const Image& image, const FlowField& flow);

}  // namespace zup
