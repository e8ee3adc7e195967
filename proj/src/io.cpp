#include "brinkhom/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace brinkhom {

namespace {

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MalformedInput("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string vec_json(const Vec3& v) {
    return "[" + format_double(v.x) + ", " + format_double(v.y) + ", " + format_double(v.z) +
           "]";
}

void append_vec_list(std::string& out, const std::vector<Vec3>& vs, const char* indent) {
    out += "[";
    for (std::size_t i = 0; i < vs.size(); ++i) {
        out += (i == 0) ? "\n" : ",\n";
        out += indent;
        out += vec_json(vs[i]);
    }
    out += vs.empty() ? "]" : "\n  ]";
}

Vec3 parse_vec(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 3) throw MalformedInput("expected a 3-vector");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string cloud_to_json(const ParticleCloud& cloud) {
    std::string out = "{\n";
    out += "  \"n\": " + std::to_string(cloud.n) + ",\n";
    out += "  \"radius\": " + format_double(cloud.radius) + ",\n";
    out += "  \"box\": {\"lo\": " + vec_json(cloud.domain.lo) +
           ", \"hi\": " + vec_json(cloud.domain.hi) + "},\n";
    out += "  \"centers\": ";
    append_vec_list(out, cloud.centers, "    ");
    out += ",\n  \"velocities\": ";
    append_vec_list(out, cloud.velocities, "    ");
    out += "\n}\n";
    return out;
}

ParticleCloud cloud_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw MalformedInput(std::string("invalid JSON: ") + e.what());
    }
    try {
        const std::size_t n = j.at("n").get<std::size_t>();
        Box box{parse_vec(j.at("box").at("lo")), parse_vec(j.at("box").at("hi"))};
        std::vector<Vec3> centers, velocities;
        for (const auto& c : j.at("centers")) centers.push_back(parse_vec(c));
        for (const auto& v : j.at("velocities")) velocities.push_back(parse_vec(v));
        if (centers.size() != n || velocities.size() != n)
            throw MalformedInput("centers/velocities length does not match n");
        ParticleCloud cloud = make_cloud(box, std::move(centers), std::move(velocities));
        const double radius = j.at("radius").get<double>();
        if (radius != cloud.radius) throw MalformedInput("radius must equal 1/n");
        return cloud;
    } catch (const nlohmann::json::exception& e) {
        throw MalformedInput(std::string("bad cloud schema: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw MalformedInput(std::string("bad cloud data: ") + e.what());
    }
}

void write_cloud(const ParticleCloud& cloud, const std::string& path) {
    write_file(path, cloud_to_json(cloud));
}

ParticleCloud read_cloud(const std::string& path) { return cloud_from_json(read_file(path)); }

std::string report_to_json(const DilutionReport& rep) {
    std::string out = "{\n";
    out += "  \"n\": " + std::to_string(rep.n) + ",\n";
    out += "  \"d_min\": " + format_double(rep.d_min) + ",\n";
    out += "  \"lambda\": " + format_double(rep.lambda) + ",\n";
    out += "  \"m_sup\": " + std::to_string(rep.m_sup) + ",\n";
    out += "  \"m_sup_upper\": " + std::to_string(rep.m_sup_upper) + ",\n";
    out += "  \"energy\": " + format_double(rep.energy) + ",\n";
    out += "  \"ratio_a4_lower\": " + format_double(rep.ratio_a4_lower) + ",\n";
    out += "  \"ratio_a4_upper\": " + format_double(rep.ratio_a4_upper) + ",\n";
    out += "  \"ratio_a5\": " + format_double(rep.ratio_a5) + ",\n";
    out += "  \"n_dmin\": " + format_double(rep.n_dmin) + ",\n";
    out += "  \"verdict\": \"" + to_string(rep.verdict) + "\"\n";
    out += "}\n";
    return out;
}

void write_report(const DilutionReport& rep, const std::string& path) {
    write_file(path, report_to_json(rep));
}

std::string covering_to_json(const CubeCovering& cov) {
    std::string out = "{\n";
    out += "  \"lambda\": " + format_double(cov.lambda) + ",\n";
    out += "  \"d\": " + std::to_string(cov.d) + ",\n";
    out += "  \"offset_index\": " + std::to_string(cov.offset_index) + ",\n";
    out += "  \"anchor\": " + vec_json(cov.anchor) + ",\n";
    out += "  \"corridor_mass\": " + format_double(cov.corridor_mass) + ",\n";
    out += "  \"total_mass\": " + format_double(cov.total_mass) + ",\n";
    out += "  \"cells\": [";
    bool first = true;
    for (const auto& [key, cell] : cov.cells) {
        out += first ? "\n" : ",\n";
        first = false;
        out += "    {\"kappa\": [" + std::to_string(key[0]) + ", " + std::to_string(key[1]) +
               ", " + std::to_string(key[2]) + "], \"center\": " + vec_json(cell.center) +
               ", \"indices\": [";
        for (std::size_t i = 0; i < cell.indices.size(); ++i) {
            if (i) out += ", ";
            out += std::to_string(cell.indices[i]);
        }
        out += "]}";
    }
    out += first ? "],\n" : "\n  ],\n";
    out += "  \"corridor_indices\": [";
    for (std::size_t i = 0; i < cov.corridor_indices.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(cov.corridor_indices[i]);
    }
    out += "]\n}\n";
    return out;
}

void write_covering(const CubeCovering& cov, const std::string& path) {
    write_file(path, covering_to_json(cov));
}

void write_brinkman_csv(const MacField& fld, const std::string& csv_path,
                        const std::string& sidecar_path) {
    const Grid& g = fld.grid;
    std::string csv = "i,j,k,x,y,z,ux,uy,uz,p\n";
    for (int k = 0; k < g.nz; ++k)
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const Vec3 c = g.cell_center(i, j, k);
                const Vec3 u = eval_field(fld, c);
                csv += std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) +
                       "," + format_double(c.x) + "," + format_double(c.y) + "," +
                       format_double(c.z) + "," + format_double(u.x) + "," +
                       format_double(u.y) + "," + format_double(u.z) + "," +
                       format_double(fld.p[g.cell_index(i, j, k)]) + "\n";
            }
    write_file(csv_path, csv);

    std::string meta = "{\n";
    meta += "  \"nx\": " + std::to_string(g.nx) + ",\n";
    meta += "  \"ny\": " + std::to_string(g.ny) + ",\n";
    meta += "  \"nz\": " + std::to_string(g.nz) + ",\n";
    meta += "  \"box\": {\"lo\": " + vec_json(g.box.lo) + ", \"hi\": " + vec_json(g.box.hi) +
            "},\n";
    meta += "  \"momentum_residual\": " + format_double(fld.momentum_residual) + ",\n";
    meta += "  \"divergence_residual\": " + format_double(fld.divergence_residual) + "\n";
    meta += "}\n";
    write_file(sidecar_path, meta);
}

std::string experiment_csv_header() {
    return "n,lambda,d_min,m_sup,energy,delta,lhs,rhs,interior_sum,cell_avg_sum,residual,"
           "budget_p21_max,budget_p41,wall_time_s\n";
}

std::string experiment_csv_row(const WeakFormReport& rep) {
    std::string row = std::to_string(rep.n);
    row += "," + format_double(rep.lambda);
    row += "," + format_double(rep.d_min);
    row += "," + std::to_string(rep.m_sup);
    row += "," + format_double(rep.energy);
    row += "," + std::to_string(rep.delta);
    row += "," + format_double(rep.lhs);
    row += "," + format_double(rep.rhs);
    row += "," + format_double(rep.interior_sum);
    row += "," + format_double(rep.cell_avg_sum);
    row += "," + format_double(rep.residual);
    row += "," + format_double(rep.budget_p21_max);
    row += "," + format_double(rep.budget_p41);
    row += "," + format_double(rep.wall_time_s);
    row += "\n";
    return row;
}

void write_experiment_csv(const std::vector<WeakFormReport>& reports, const std::string& path) {
    std::string out = experiment_csv_header();
    for (const WeakFormReport& r : reports) out += experiment_csv_row(r);
    write_file(path, out);
}

}  // namespace brinkhom
