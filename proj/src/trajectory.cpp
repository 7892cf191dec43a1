#include "trajlab/trajectory.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "trajlab/errors.hpp"

namespace trajlab {

namespace {

bool parse_field(const std::string& text, double& out) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc{}) return false;
    while (ptr < end && (*ptr == ' ' || *ptr == '\t' || *ptr == '\r')) ++ptr;
    return ptr == end;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    return fields;
}

}  // namespace

void Trajectory::validate() const {
    if (samples.size() < 2) throw DataError("trajectory: needs at least 2 samples");
    if (!(frame_rate > 0.0)) throw DataError("trajectory: frame_rate must be positive");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!samples[i].finite())
            throw DataError("trajectory: non-finite sample at frame " + std::to_string(i));
    }
}

void write_trajectory_csv(const Trajectory& trajectory, const std::string& path) {
    trajectory.validate();
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw IoError("cannot open for writing: " + path);
    std::fputs("frame,x,y,z\n", f);
    for (std::size_t i = 0; i < trajectory.samples.size(); ++i) {
        const Vec3& p = trajectory.samples[i];
        std::fprintf(f, "%zu,%.12g,%.12g,%.12g\n", i, p.x, p.y, p.z);
    }
    if (std::fclose(f) != 0) throw IoError("write failed: " + path);
}

Trajectory read_trajectory_csv(const std::string& path, double frame_rate, int label,
                               std::uint64_t seed) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open trajectory file: " + path);

    Trajectory traj;
    traj.frame_rate = frame_rate;
    traj.label = label;
    traj.scenario_seed = seed;

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line_no == 1) {
            if (line.rfind("frame", 0) != 0)
                throw DataError(path + ": missing `frame,x,y,z` header");
            continue;
        }
        auto fields = split_csv(line);
        if (fields.size() != 4)
            throw DataError(path + ":" + std::to_string(line_no) + ": expected 4 columns");
        double frame, x, y, z;
        if (!parse_field(fields[0], frame) || !parse_field(fields[1], x) ||
            !parse_field(fields[2], y) || !parse_field(fields[3], z))
            throw DataError(path + ":" + std::to_string(line_no) + ": malformed row");
        traj.samples.push_back({x, y, z});
    }
    traj.validate();
    return traj;
}

Trajectory load_external_trajectory(const std::string& path, double frame_rate) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open trajectory file: " + path);

    Trajectory traj;
    traj.frame_rate = frame_rate;

    std::string line;
    int line_no = 0;
    int n_columns = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = split_csv(line);
        if (line_no == 1) {
            double probe;
            if (!parse_field(fields[0], probe)) continue;  // header line
        }
        if (n_columns == 0) {
            if (fields.size() != 1 && fields.size() != 3)
                throw DataError(path + ":" + std::to_string(line_no) +
                                ": expected 1 (z) or 3 (x,y,z) columns");
            n_columns = static_cast<int>(fields.size());
        } else if (static_cast<int>(fields.size()) != n_columns) {
            throw DataError(path + ":" + std::to_string(line_no) + ": inconsistent column count");
        }
        double vals[3] = {0.0, 0.0, 0.0};
        for (int c = 0; c < n_columns; ++c) {
            if (!parse_field(fields[c], vals[c]))
                throw DataError(path + ":" + std::to_string(line_no) + ": malformed value `" +
                                fields[c] + "`");
            if (!std::isfinite(vals[c]))
                throw DataError(path + ":" + std::to_string(line_no) + ": non-finite value");
        }
        if (n_columns == 1)
            traj.samples.push_back({0.0, 0.0, vals[0]});
        else
            traj.samples.push_back({vals[0], vals[1], vals[2]});
    }
    traj.z_only = (n_columns == 1);
    if (traj.samples.size() < 2)
        throw DataError(path + ": needs at least 2 samples");
    traj.validate();
    return traj;
}

}  // namespace trajlab
