#include "zup/warp.hpp"

namespace zup {

Image backward_warp(const Image& image, const FlowField& flow) {
    require_same_shape(image, flow.u, "backward_warp");
    if (!flow.all_finite()) throw ArgumentError("backward_warp: flow contains non-finite values");
    Image out(image.height(), image.width());
    for (int y = 0; y < image.height(); ++y) {
        for (int x = 0; x < image.width(); ++x) {
            out.at(y, x) = sample_bilinear(image, x + flow.u.at(y, x), y + flow.v.at(y, x));
        }
    }
    return out;
}

}  // namespace zup
