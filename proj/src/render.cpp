#include "embc/environment.hpp"

#include "embc/rng.hpp"

#include <algorithm>
#include <cmath>

namespace embc {

namespace {

// Lattice value noise in [0, 1], smoothstep-interpolated.
double lattice(std::int64_t ix, std::int64_t iy, std::uint64_t seed) {
    const std::uint64_t h = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(ix) * 0x9E3779B1ull +
                                                         static_cast<std::uint64_t>(iy)));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double value_noise(double x, double y, double cell, std::uint64_t seed) {
    const double fx = x / cell, fy = y / cell;
    const double x0 = std::floor(fx), y0 = std::floor(fy);
    const auto ix = static_cast<std::int64_t>(x0), iy = static_cast<std::int64_t>(y0);
    double tx = fx - x0, ty = fy - y0;
    tx = tx * tx * (3 - 2 * tx);
    ty = ty * ty * (3 - 2 * ty);
    const double a = lattice(ix, iy, seed), b = lattice(ix + 1, iy, seed);
    const double c = lattice(ix, iy + 1, seed), d = lattice(ix + 1, iy + 1, seed);
    return (a + (b - a) * tx) + ((c + (d - c) * tx) - (a + (b - a) * tx)) * ty;
}

Rgb mix(Rgb a, Rgb b, double t) {
    t = std::clamp(t, 0.0, 1.0);
    return {clamp_to_byte(a[0] + (b[0] - a[0]) * t), clamp_to_byte(a[1] + (b[1] - a[1]) * t),
            clamp_to_byte(a[2] + (b[2] - a[2]) * t)};
}

Rgb shade(Rgb c, double delta) {
    return {clamp_to_byte(c[0] + delta), clamp_to_byte(c[1] + delta), clamp_to_byte(c[2] + delta)};
}

// Wood grain: stripes along x with noise-warped phase.
Rgb grain(Rgb base, double amplitude, double x, double y, std::uint64_t seed) {
    const double warp = value_noise(x, y, 0.05, seed) * 6.0;
    const double stripe = std::sin((y * 90.0 + warp) * 2.0);
    return shade(base, amplitude * stripe);
}

} // namespace

Rgb table_color_at(TableId table, double x, double y) {
    switch (table) {
    case TableId::black:
        return shade({32, 32, 36}, 8.0 * (value_noise(x, y, 0.01, 11) - 0.5));
    case TableId::ceramic: {
        constexpr double tile = 0.06;
        const double gx = std::fmod(std::fabs(x + 1.0), tile), gy = std::fmod(std::fabs(y + 1.0), tile);
        if (gx < 0.003 || gy < 0.003)
            return {180, 178, 172};
        return shade({222, 220, 214}, 6.0 * (value_noise(x, y, 0.02, 12) - 0.5));
    }
    case TableId::cherry: return grain({118, 48, 38}, 12.0, x, y, 13);
    case TableId::wood_dark: return grain({84, 58, 40}, 10.0, x, y, 14);
    case TableId::wood_light: return grain({196, 162, 118}, 12.0, x, y, 15);
    }
    return {0, 0, 0};
}

Rgb background_color_at(BackgroundId background, double x, double y) {
    switch (background) {
    case BackgroundId::daily: {
        const double n = 0.65 * value_noise(x, y, 0.08, 21) + 0.35 * value_noise(x, y, 0.025, 22);
        return mix({100, 104, 112}, {150, 146, 140}, n);
    }
    case BackgroundId::dark: return shade({24, 26, 32}, 10.0 * (value_noise(x, y, 0.03, 23) - 0.5));
    case BackgroundId::light: return shade({236, 234, 228}, 8.0 * (value_noise(x, y, 0.03, 24) - 0.5));
    case BackgroundId::wall: {
        constexpr double bw = 0.12, bh = 0.05, mortar = 0.006;
        const double row = std::floor((y + 1.0) / bh);
        const double offset = std::fmod(row, 2.0) * bw / 2.0;
        const double mx = std::fmod(x + 1.0 + offset, bw), my = std::fmod(y + 1.0, bh);
        if (mx < mortar || my < mortar)
            return {200, 195, 185};
        return shade({130, 80, 70}, 14.0 * (value_noise(x, y, 0.02, 25) - 0.5));
    }
    }
    return {0, 0, 0};
}

Camera third_person_camera() { return Camera{}; }

Camera first_person_camera(const Vec3& gripper) {
    Camera c;
    c.pixels_per_meter = 720.0;
    c.center_x = gripper.x;
    c.center_y = gripper.y + c.oblique * gripper.z;
    return c;
}

namespace {

RasterImage static_layer(const SceneSpec& scene, const Camera& cam) {
    RasterImage img(cam.width, cam.height);
    for (int v = 0; v < cam.height; ++v) {
        const double y = cam.center_y + (cam.height / 2.0 - (v + 0.5)) / cam.pixels_per_meter;
        for (int u = 0; u < cam.width; ++u) {
            const double x = cam.center_x + (u + 0.5 - cam.width / 2.0) / cam.pixels_per_meter;
            const bool on_table = std::fabs(x) <= kTableHalfSize && std::fabs(y) <= kTableHalfSize;
            img.set(u, v, on_table ? table_color_at(scene.table, x, y) : background_color_at(scene.background, x, y));
        }
    }
    return img;
}

bool in_footprint(const ObjectGeometry& g, double lx, double ly) {
    switch (g.shape) {
    case Shape::box: return std::fabs(lx) <= g.half_length_m && std::fabs(ly) <= g.half_extent_m;
    case Shape::cylinder:
    case Shape::sphere: return lx * lx + ly * ly <= g.half_extent_m * g.half_extent_m;
    case Shape::capsule: {
        const double reach = std::max(0.0, g.half_length_m - g.half_extent_m);
        const double cx = std::clamp(lx, -reach, reach);
        return (lx - cx) * (lx - cx) + ly * ly <= g.half_extent_m * g.half_extent_m;
    }
    case Shape::annulus: {
        const double r2 = lx * lx + ly * ly;
        const double inner = 0.45 * g.half_extent_m;
        return r2 <= g.half_extent_m * g.half_extent_m && r2 >= inner * inner;
    }
    }
    return false;
}

// Calls visit(u, v) for every pixel covered by the object's oblique sweep.
template <typename Visit>
void rasterize_object(const Camera& cam, const ObjectGeometry& g, const Vec3& base, Visit&& visit) {
    const double s = cam.pixels_per_meter;
    const double bound = std::hypot(g.half_extent_m, g.half_length_m);
    const double u0 = cam.u(base);
    const double v_base = cam.v(base);
    const double v_top = cam.v({base.x, base.y, base.z + g.height_m});
    const int umin = std::max(0, static_cast<int>(std::floor(u0 - s * bound)) - 1);
    const int umax = std::min(cam.width - 1, static_cast<int>(std::ceil(u0 + s * bound)) + 1);
    const int vmin = std::max(0, static_cast<int>(std::floor(v_top - s * bound)) - 1);
    const int vmax = std::min(cam.height - 1, static_cast<int>(std::ceil(v_base + s * bound)) + 1);

    const double c = std::cos(g.yaw), sn = std::sin(g.yaw);
    const bool sphere = g.shape == Shape::sphere;
    const double sweep = sphere ? 0.0 : g.height_m;
    const int samples = sphere ? 1 : std::max(2, static_cast<int>(std::ceil(s * cam.oblique * sweep / 0.5)) + 1);
    const double z0 = sphere ? base.z + g.half_extent_m : base.z;

    for (int v = vmin; v <= vmax; ++v) {
        const double yeff = cam.center_y + (cam.height / 2.0 - (v + 0.5)) / s;
        for (int u = umin; u <= umax; ++u) {
            const double x = cam.center_x + (u + 0.5 - cam.width / 2.0) / s;
            const double dx = x - base.x;
            for (int i = 0; i < samples; ++i) {
                const double z = z0 + (samples > 1 ? sweep * i / (samples - 1) : 0.0);
                const double dy = yeff - cam.oblique * z - base.y;
                const double lx = c * dx + sn * dy;
                const double ly = -sn * dx + c * dy;
                if (in_footprint(g, lx, ly)) {
                    visit(u, v);
                    break;
                }
            }
        }
    }
}

void draw_gripper(RasterImage& img, const Camera& cam, const WorldState& state) {
    constexpr Rgb kGripperColor{70, 70, 78};
    const double gu = cam.u(state.gripper), gv = cam.v(state.gripper);
    const double scale = cam.pixels_per_meter / 360.0;
    const double outer = 7.0 * scale;
    const double inner = state.gripper_open ? 4.5 * scale : 0.0;
    const int umin = std::max(0, static_cast<int>(gu - outer) - 1);
    const int umax = std::min(img.width() - 1, static_cast<int>(gu + outer) + 1);
    const int vmin = std::max(0, static_cast<int>(gv - outer) - 1);
    const int vmax = std::min(img.height() - 1, static_cast<int>(gv + outer) + 1);
    for (int v = vmin; v <= vmax; ++v)
        for (int u = umin; u <= umax; ++u) {
            const double r = std::hypot(u + 0.5 - gu, v + 0.5 - gv);
            if (r <= outer && r >= inner)
                img.set(u, v, kGripperColor);
        }
}

RasterImage compose(RasterImage img, const Camera& cam, const WorldState& state) {
    // The gripper marker is drawn beneath the object so it never occludes the target.
    draw_gripper(img, cam, state);
    const Rgb color = object_spec(state.scene.object).color_rgb;
    rasterize_object(cam, current_geometry(state), state.object_pose.position,
                     [&](int u, int v) { img.set(u, v, color); });
    return img;
}

} // namespace

Renderer::Renderer(const SceneSpec& scene) : scene_(scene), third_person_static_(static_layer(scene, third_person_camera())) {}

RasterImage Renderer::render(const WorldState& state, View view) const {
    if (view == View::third_person && state.scene.table == scene_.table && state.scene.background == scene_.background)
        return compose(third_person_static_, third_person_camera(), state);
    const Camera cam = view == View::third_person ? third_person_camera() : first_person_camera(state.gripper);
    return compose(static_layer(state.scene, cam), cam, state);
}

RasterImage render(const WorldState& state, View view) {
    const Camera cam = view == View::third_person ? third_person_camera() : first_person_camera(state.gripper);
    return compose(static_layer(state.scene, cam), cam, state);
}

double expected_silhouette_area(ObjectId id) {
    static const std::array<double, 11> areas = [] {
        std::array<double, 11> out{};
        for (std::size_t i = 0; i < kAllObjects.size(); ++i) {
            const auto& spec = object_catalog()[i];
            const ObjectGeometry g{spec.shape, spec.half_extent_m, spec.half_length_m, spec.height_m, 0.0};
            double n = 0;
            rasterize_object(third_person_camera(), g, {0.0, 0.0, 0.0}, [&](int, int) { n += 1; });
            out[i] = n;
        }
        return out;
    }();
    return areas[static_cast<std::size_t>(id)];
}

} // namespace embc
