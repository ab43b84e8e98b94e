#include "wulffmc/serialize.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <utility>

namespace wulffmc {

std::string format_double(double v) {
    char buf[40];
    const auto out = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, out.ptr);
}

double parse_double(std::string_view text) {
    double v = 0.0;
    const auto out = std::from_chars(text.data(), text.data() + text.size(), v);
    if (out.ec != std::errc{} || out.ptr != text.data() + text.size())
        throw RecordError("bad number '" + std::string(text) + "'");
    return v;
}

// restores serialized fields verbatim; invariants are re-validated by the
// parser, not re-derived, so round-trips are bitwise
class ShapeRecordAccess {
  public:
    static Shape build(ShapeFamily family, int dim, double scale, int sides, int n_polar,
                       int n_azimuth, std::vector<double> values, Pose pose, double refvol) {
        Shape s;
        s.family_ = family;
        s.dim_ = dim;
        s.scale_ = scale;
        s.sides_ = sides;
        s.n_polar_ = n_polar;
        s.n_azimuth_ = n_azimuth;
        s.values_ = std::move(values);
        if (family == ShapeFamily::RadialGrid && dim == 3)
            gauss_legendre(n_polar, s.polar_nodes_, s.polar_weights_);
        s.pose_ = pose;
        s.reference_volume_ = refvol;
        return s;
    }
};

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& what) {
    throw RecordError("line " + std::to_string(line) + ": " + what);
}

struct Lines {
    std::vector<std::string> rows;
    std::size_t at = 0;

    explicit Lines(std::string_view text) {
        std::size_t start = 0;
        while (start <= text.size()) {
            const auto nl = text.find('\n', start);
            if (nl == std::string_view::npos) {
                rows.emplace_back(text.substr(start));
                break;
            }
            rows.emplace_back(text.substr(start, nl - start));
            start = nl + 1;
        }
        while (!rows.empty() && rows.back().empty()) rows.pop_back();
    }

    bool done() const { return at >= rows.size(); }
    std::size_t last_line() const { return at; }  // 1-based number of the row just read

    std::vector<std::string> next(std::size_t& line) {
        skip_comments();
        if (done()) throw RecordError("unexpected end of record");
        line = at + 1;
        std::istringstream in(rows[at++]);
        std::vector<std::string> tokens;
        std::string t;
        while (in >> t) tokens.push_back(t);
        return tokens;
    }

    // '#' rows carry provenance only; line numbers still count them
    void skip_comments() {
        while (at < rows.size()) {
            const auto pos = rows[at].find_first_not_of(" \t");
            if (pos == std::string::npos || rows[at][pos] != '#') break;
            ++at;
        }
    }
};

void expect_header(Lines& reader, const std::string& tag) {
    std::size_t line = 0;
    const auto tokens = reader.next(line);
    if (tokens.size() != 2 || tokens[0] != tag || tokens[1] != "v1")
        fail(line, "expected '" + tag + " v1' header");
}

bool identity_bits(const Pose& pose) {
    const Mat3 eye = Mat3::identity();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (pose.rot(i, j) != eye(i, j)) return false;
    return pose.offset.x == 0.0 && pose.offset.y == 0.0 && pose.offset.z == 0.0;
}

std::string family_tag(ShapeFamily family) {
    switch (family) {
        case ShapeFamily::Ball: return "ball";
        case ShapeFamily::RegularPolygon: return "polygon";
        case ShapeFamily::Cuboctahedron: return "cuboctahedron";
        case ShapeFamily::RadialGrid: return "grid";
    }
    return "?";
}

// shape body shared by the standalone record and the nested configuration use
Shape parse_shape_body(Lines& reader) {
    expect_header(reader, "shape");
    bool have_family = false, have_dim = false, have_refvol = false, have_scale = false;
    bool have_sides = false, have_count = false, have_grid = false, have_values = false;
    bool have_pose = false;
    ShapeFamily family = ShapeFamily::Ball;
    int dim = 0, sides = 0, n_polar = 0, n_azimuth = 0;
    std::size_t count = 0;
    double refvol = 0.0, scale = 0.0;
    std::vector<double> values;
    Pose pose;
    std::size_t end_line = 0;

    for (;;) {
        std::size_t line = 0;
        const auto tok = reader.next(line);
        if (tok.empty()) fail(line, "blank line inside record");
        const std::string& key = tok[0];
        const auto need = [&](std::size_t n) {
            if (tok.size() != n + 1)
                fail(line, "'" + key + "' takes " + std::to_string(n) + " value(s)");
        };
        const auto once = [&](bool& flag) {
            if (flag) fail(line, "duplicate key '" + key + "'");
            flag = true;
        };
        if (key == "end") {
            need(1);
            if (tok[1] != "shape") fail(line, "expected 'end shape'");
            end_line = line;
            break;
        } else if (key == "family") {
            need(1);
            once(have_family);
            if (tok[1] == "ball") family = ShapeFamily::Ball;
            else if (tok[1] == "polygon") family = ShapeFamily::RegularPolygon;
            else if (tok[1] == "cuboctahedron") family = ShapeFamily::Cuboctahedron;
            else if (tok[1] == "grid") family = ShapeFamily::RadialGrid;
            else fail(line, "unknown family '" + tok[1] + "'");
        } else if (key == "dim") {
            need(1);
            once(have_dim);
            dim = static_cast<int>(parse_double(tok[1]));
            if (dim != 2 && dim != 3) fail(line, "dim must be 2 or 3");
        } else if (key == "refvol") {
            need(1);
            once(have_refvol);
            refvol = parse_double(tok[1]);
            if (!(refvol > 0.0) || !std::isfinite(refvol)) fail(line, "refvol must be positive");
        } else if (key == "scale") {
            need(1);
            once(have_scale);
            scale = parse_double(tok[1]);
            if (!(scale > 0.0) || !std::isfinite(scale)) fail(line, "scale must be positive");
        } else if (key == "sides") {
            need(1);
            once(have_sides);
            sides = static_cast<int>(parse_double(tok[1]));
            if (sides < 3) fail(line, "polygon needs at least 3 sides");
        } else if (key == "count") {
            need(1);
            once(have_count);
            count = static_cast<std::size_t>(parse_double(tok[1]));
        } else if (key == "grid") {
            need(2);
            once(have_grid);
            n_polar = static_cast<int>(parse_double(tok[1]));
            n_azimuth = static_cast<int>(parse_double(tok[2]));
        } else if (key == "values") {
            once(have_values);
            values.reserve(tok.size() - 1);
            for (std::size_t i = 1; i < tok.size(); ++i) {
                const double v = parse_double(tok[i]);
                if (!std::isfinite(v) || v < kRadialFloor - 1e-9)
                    fail(line, "grid value below the radial floor");
                values.push_back(v);
            }
        } else if (key == "pose") {
            need(12);
            once(have_pose);
            for (int i = 0; i < 9; ++i)
                pose.rot(i / 3, i % 3) = parse_double(tok[static_cast<std::size_t>(1 + i)]);
            pose.offset = {parse_double(tok[10]), parse_double(tok[11]), parse_double(tok[12])};
            if (!pose.rot.is_rotation(1e-9)) fail(line, "pose rotation is not orthonormal");
            if (!pose.offset.finite()) fail(line, "pose offset must be finite");
        } else {
            fail(line, "unknown key '" + key + "'");
        }
    }

    if (!have_family) fail(end_line, "missing 'family'");
    if (!have_dim) fail(end_line, "missing 'dim'");
    if (!have_refvol) fail(end_line, "missing 'refvol'");
    const auto forbid = [&](bool flag, const char* what) {
        if (flag) fail(end_line, std::string(what) + " not valid for family '" +
                                     family_tag(family) + "'");
    };
    switch (family) {
        case ShapeFamily::Ball:
            if (!have_scale) fail(end_line, "missing 'scale'");
            forbid(have_sides, "'sides'");
            forbid(have_count || have_grid || have_values, "grid data");
            break;
        case ShapeFamily::RegularPolygon:
            if (!have_scale) fail(end_line, "missing 'scale'");
            if (!have_sides) fail(end_line, "missing 'sides'");
            if (dim != 2) fail(end_line, "polygons are planar");
            forbid(have_count || have_grid || have_values, "grid data");
            break;
        case ShapeFamily::Cuboctahedron:
            if (!have_scale) fail(end_line, "missing 'scale'");
            if (dim != 3) fail(end_line, "the cuboctahedron is spatial");
            forbid(have_sides, "'sides'");
            forbid(have_count || have_grid || have_values, "grid data");
            break;
        case ShapeFamily::RadialGrid:
            forbid(have_scale, "'scale'");
            forbid(have_sides, "'sides'");
            if (!have_values) fail(end_line, "missing 'values'");
            if (dim == 2) {
                if (!have_count) fail(end_line, "missing 'count'");
                forbid(have_grid, "'grid'");
                if (count < 8) fail(end_line, "planar grid needs at least 8 values");
                if (values.size() != count) fail(end_line, "'count' does not match the values");
            } else {
                if (!have_grid) fail(end_line, "missing 'grid'");
                forbid(have_count, "'count'");
                if (n_polar < 4 || n_azimuth < 8) fail(end_line, "grid too coarse");
                if (values.size() != static_cast<std::size_t>(n_polar) * n_azimuth)
                    fail(end_line, "'grid' does not match the values");
            }
            break;
    }
    if (dim == 2 && have_pose) {
        // planar poses rotate about z and translate in the plane
        const bool planar = std::abs(pose.rot(0, 2)) < 1e-9 && std::abs(pose.rot(1, 2)) < 1e-9 &&
                            std::abs(pose.rot(2, 0)) < 1e-9 && std::abs(pose.rot(2, 1)) < 1e-9 &&
                            std::abs(pose.rot(2, 2) - 1.0) < 1e-9 &&
                            std::abs(pose.offset.z) <= 1e-12;
        if (!planar) fail(end_line, "pose leaves the plane");
    }

    Shape shape = ShapeRecordAccess::build(family, dim, have_scale ? scale : 1.0, sides, n_polar,
                                           n_azimuth, std::move(values), pose, refvol);
    const double v = shape.volume();
    if (!(std::abs(v - refvol) <= 1e-6 * refvol))
        fail(end_line, "stored refvol " + format_double(refvol) +
                           " disagrees with the shape volume " + format_double(v));
    return shape;
}

void emit_shape(std::string& out, const Shape& shape) {
    out += "shape v1\n";
    out += "family " + family_tag(shape.family()) + "\n";
    out += "dim " + std::to_string(shape.dim()) + "\n";
    out += "refvol " + format_double(shape.reference_volume()) + "\n";
    switch (shape.family()) {
        case ShapeFamily::Ball:
        case ShapeFamily::Cuboctahedron:
            out += "scale " + format_double(shape.scale()) + "\n";
            break;
        case ShapeFamily::RegularPolygon:
            out += "scale " + format_double(shape.scale()) + "\n";
            out += "sides " + std::to_string(shape.sides()) + "\n";
            break;
        case ShapeFamily::RadialGrid: {
            if (shape.dim() == 2)
                out += "count " + std::to_string(shape.grid_values().size()) + "\n";
            else
                out += "grid " + std::to_string(shape.grid_polar()) + " " +
                       std::to_string(shape.grid_azimuth()) + "\n";
            out += "values";
            for (double v : shape.grid_values()) out += " " + format_double(v);
            out += "\n";
            break;
        }
    }
    if (!identity_bits(shape.pose())) {
        out += "pose";
        for (int i = 0; i < 9; ++i) out += " " + format_double(shape.pose().rot(i / 3, i % 3));
        out += " " + format_double(shape.pose().offset.x);
        out += " " + format_double(shape.pose().offset.y);
        out += " " + format_double(shape.pose().offset.z);
        out += "\n";
    }
    out += "end shape\n";
}

}  // namespace

std::string shape_record(const Shape& shape) {
    std::string out;
    emit_shape(out, shape);
    return out;
}

Shape parse_shape_record(std::string_view text) {
    Lines reader(text);
    Shape shape = parse_shape_body(reader);
    reader.skip_comments();
    if (!reader.done()) fail(reader.last_line() + 1, "trailing content after 'end shape'");
    return shape;
}

std::string configuration_record(const ParticleConfiguration& config) {
    std::string out = "configuration v1\n";
    const int dim = config.container().dim();
    out += "dim " + std::to_string(dim) + "\n";
    out += "count " + std::to_string(config.size()) + "\n";
    out += "volume " + format_double(config.container().target_volume()) + "\n";
    out += std::string("core ") + (config.validates_core() ? "1" : "0") + "\n";
    emit_shape(out, config.container().shape());
    for (const Vec& p : config.positions()) {
        out += "pos " + format_double(p.x) + " " + format_double(p.y);
        if (dim == 3) out += " " + format_double(p.z);
        out += "\n";
    }
    out += "end configuration\n";
    return out;
}

ParticleConfiguration parse_configuration_record(std::string_view text) {
    Lines reader(text);
    expect_header(reader, "configuration");
    bool have_dim = false, have_count = false, have_volume = false, have_core = false;
    int dim = 0;
    std::size_t count = 0;
    double target_volume = 0.0;
    bool core = true;

    std::size_t line = 0;
    for (;;) {
        const auto tok = reader.next(line);
        if (tok.empty()) fail(line, "blank line inside record");
        const std::string& key = tok[0];
        if (key == "shape") {
            reader.at -= 1;  // the shape parser re-reads its own header
            break;
        }
        if (tok.size() != 2) fail(line, "'" + key + "' takes 1 value");
        const auto once = [&](bool& flag) {
            if (flag) fail(line, "duplicate key '" + key + "'");
            flag = true;
        };
        if (key == "dim") {
            once(have_dim);
            dim = static_cast<int>(parse_double(tok[1]));
            if (dim != 2 && dim != 3) fail(line, "dim must be 2 or 3");
        } else if (key == "count") {
            once(have_count);
            count = static_cast<std::size_t>(parse_double(tok[1]));
            if (count < 1) fail(line, "need at least one particle");
        } else if (key == "volume") {
            once(have_volume);
            target_volume = parse_double(tok[1]);
            if (!(target_volume > 0.0) || !std::isfinite(target_volume))
                fail(line, "volume must be positive");
        } else if (key == "core") {
            once(have_core);
            if (tok[1] != "0" && tok[1] != "1") fail(line, "core must be 0 or 1");
            core = tok[1] == "1";
        } else {
            fail(line, "unknown key '" + key + "'");
        }
    }
    if (!have_dim) fail(line, "missing 'dim'");
    if (!have_count) fail(line, "missing 'count'");
    if (!have_volume) fail(line, "missing 'volume'");
    if (!have_core) fail(line, "missing 'core'");

    const Shape shape = parse_shape_body(reader);
    if (shape.dim() != dim) fail(reader.last_line(), "shape dimension disagrees with 'dim'");

    std::vector<Vec> positions;
    positions.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const auto tok = reader.next(line);
        if (tok.empty() || tok[0] != "pos") fail(line, "expected a 'pos' row");
        if (tok.size() != static_cast<std::size_t>(dim) + 1)
            fail(line, "'pos' takes " + std::to_string(dim) + " coordinates");
        Vec p{parse_double(tok[1]), parse_double(tok[2]), 0.0};
        if (dim == 3) p.z = parse_double(tok[3]);
        positions.push_back(p);
    }
    const auto tail = reader.next(line);
    if (tail.size() != 2 || tail[0] != "end" || tail[1] != "configuration")
        fail(line, "expected 'end configuration'");
    reader.skip_comments();
    if (!reader.done()) fail(reader.last_line() + 1, "trailing content after 'end configuration'");

    try {
        return ParticleConfiguration(ScaledContainer(shape, target_volume), positions, core);
    } catch (const std::exception& e) {
        throw RecordError("configuration invalid: " + std::string(e.what()));
    }
}

}  // namespace wulffmc
