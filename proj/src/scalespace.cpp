#include "flarespot/scalespace.hpp"

#include <algorithm>
#include <cmath>

namespace flarespot {

namespace {

// Reflect an index into [0, n): ...2 1 0 | 0 1 2 ... n-1 | n-1 n-2...
int reflect(int i, int n) {
    while (i < 0 || i >= n) {
        if (i < 0) i = -i - 1;
        if (i >= n) i = 2 * n - 1 - i;
    }
    return i;
}

std::vector<double> gaussian_kernel(double sigma) {
    const int radius = static_cast<int>(std::ceil(4.0 * sigma));
    std::vector<double> k(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        const double v = std::exp(-0.5 * i * i / (sigma * sigma));
        k[i + radius] = v;
        sum += v;
    }
    for (double& v : k) v /= sum;
    return k;
}

}  // namespace

GrayPlane gaussian_blur(const GrayPlane& src, double sigma) {
    const std::vector<double> kern = gaussian_kernel(sigma);
    const int radius = static_cast<int>(kern.size() / 2);
    const int w = src.width();
    const int h = src.height();

    GrayPlane tmp(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int t = -radius; t <= radius; ++t)
                acc += kern[t + radius] * src.at(reflect(x + t, w), y);
            tmp.at(x, y) = acc;
        }
    }
    GrayPlane out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int t = -radius; t <= radius; ++t)
                acc += kern[t + radius] * tmp.at(x, reflect(y + t, h));
            out.at(x, y) = acc;
        }
    }
    return out;
}

ScaleSpace build_scalespace(const GrayPlane& gray, double sigmaMin, double sigmaMax, double k) {
    if (std::min(gray.width(), gray.height()) < 4.0 * sigmaMin)
        throw ImageTooSmallError("image smaller than 4*sigmaMin in one dimension");

    std::vector<double> sigmas;
    double sigma = sigmaMin;
    while (true) {
        sigmas.push_back(sigma);
        if (sigma >= sigmaMax) break;
        sigma *= k;
    }
    sigmas.push_back(sigmas.back() * k);  // extra level so the top scale has a DoG above

    ScaleSpace ss;
    ss.levels.reserve(sigmas.size());
    for (double s : sigmas)
        ss.levels.push_back({s, gaussian_blur(gray, s)});

    ss.dogs.reserve(sigmas.size() - 1);
    for (std::size_t i = 0; i + 1 < ss.levels.size(); ++i) {
        GrayPlane d(gray.width(), gray.height());
        const auto& hiv = ss.levels[i + 1].plane.values();
        const auto& lov = ss.levels[i].plane.values();
        for (std::size_t j = 0; j < d.values().size(); ++j)
            d.values()[j] = hiv[j] - lov[j];
        ss.dogs.push_back({ss.levels[i].sigma, std::move(d)});
    }
    return ss;
}

std::vector<Keypoint> detect_keypoints(const ScaleSpace& ss) {
    std::vector<Keypoint> out;
    if (ss.dogs.size() < 3) return out;

    const int w = ss.dogs.front().plane.width();
    const int h = ss.dogs.front().plane.height();

    for (std::size_t s = 1; s + 1 < ss.dogs.size(); ++s) {
        const GrayPlane& below = ss.dogs[s - 1].plane;
        const GrayPlane& cur = ss.dogs[s].plane;
        const GrayPlane& above = ss.dogs[s + 1].plane;

        for (int y = 1; y < h - 1; ++y) {
            for (int x = 1; x < w - 1; ++x) {
                const double v = cur.at(x, y);
                if (v >= 0.0) continue;  // bright blobs are DoG minima

                bool strictMin = true;
                for (int dy = -1; dy <= 1 && strictMin; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (v >= below.at(x + dx, y + dy) || v >= above.at(x + dx, y + dy) ||
                            ((dx != 0 || dy != 0) && v >= cur.at(x + dx, y + dy))) {
                            strictMin = false;
                            break;
                        }
                    }
                }
                if (!strictMin) continue;

                const double dxx = cur.at(x + 1, y) - 2.0 * v + cur.at(x - 1, y);
                const double dyy = cur.at(x, y + 1) - 2.0 * v + cur.at(x, y - 1);
                const double dxy = (cur.at(x + 1, y + 1) - cur.at(x + 1, y - 1) -
                                    cur.at(x - 1, y + 1) + cur.at(x - 1, y - 1)) / 4.0;
                const double tr = dxx + dyy;
                const double disc = std::sqrt((dxx - dyy) * (dxx - dyy) + 4.0 * dxy * dxy);

                Keypoint kp;
                kp.position = {x, y};
                kp.scaleIndex = static_cast<int>(s);
                kp.sigma = ss.dogs[s].sigma;
                kp.response = v;
                kp.lambda1 = (tr - disc) / 2.0;
                kp.lambda2 = (tr + disc) / 2.0;
                out.push_back(kp);
            }
        }
    }
    return out;  // scan order already gives (scale index, raster position)
}

bool elongation_ok(const Keypoint& kp) {
    return kp.lambda1 > 0.0 && kp.lambda2 < 4.0 * kp.lambda1;
}

}  // namespace flarespot
