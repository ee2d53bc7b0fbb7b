#include "df2d/scenario.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace df2d {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

Codomain parse_codomain(const std::string& s) {
    if (s == "scalar") return Codomain::Scalar;
    if (s == "vector") return Codomain::Vector;
    if (s == "tensor") return Codomain::Tensor;
    if (s == "sym_tensor") return Codomain::SymTensor;
    throw FieldError("unknown codomain '" + s + "'");
}

Parity parse_parity(const std::string& s) {
    if (s == "cos") return Parity::Cos;
    if (s == "sin") return Parity::Sin;
    throw FieldError("unknown parity '" + s + "' (expected 'cos' or 'sin')");
}

MultiIndex parse_alpha(const json& j) {
    if (!j.is_array() || j.size() != 2)
        throw FieldError("'alpha' must be an array of two non-negative integers");
    return MultiIndex(j[0].get<int>(), j[1].get<int>());
}

Value parse_value(const json& j, Codomain cod) {
    if (!j.is_array()) throw FieldError("'value' must be an array of numbers");
    if (cod == Codomain::Scalar) {
        if (j.size() != 1) throw FieldError("scalar 'value' must have one entry");
        return j[0].get<double>();
    }
    if (cod == Codomain::Vector) {
        if (j.size() != 2) throw FieldError("vector 'value' must have two entries");
        return Eigen::Vector2d(j[0].get<double>(), j[1].get<double>());
    }
    if (j.size() != 4)
        throw FieldError("tensor 'value' must have four row-major entries");
    Eigen::Matrix2d M;
    M << j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>();
    return M;
}

SingularField parse_field(const json& j, double R) {
    if (!j.contains("codomain"))
        throw FieldError("field spec is missing 'codomain'");
    Codomain cod = parse_codomain(j.at("codomain").get<std::string>());
    SingularField F(cod, R);
    if (j.contains("terms"))
        for (const auto& t : j.at("terms")) {
            int ch = t.at("channel").get<int>();
            if (ch < 0 || ch >= F.channels())
                throw FieldError("term channel out of range");
            F.add_term(ch, SmoothTerm(t.at("coeff").get<double>(), t.at("k").get<int>(),
                                      t.value("log_power", 0), t.value("mode", 0),
                                      parse_parity(t.value("parity", "cos"))));
        }
    if (j.contains("point"))
        for (const auto& p : j.at("point"))
            F.add_point(parse_alpha(p.at("alpha")), parse_value(p.at("value"), cod));
    F.normalize();
    return F;
}

std::map<MultiIndex, Eigen::Vector2d> parse_vector_point(const json& j) {
    std::map<MultiIndex, Eigen::Vector2d> out;
    for (const auto& p : j) {
        const auto& v = p.at("value");
        if (!v.is_array() || v.size() != 2)
            throw FieldError("vector point 'value' must have two entries");
        auto it = out.try_emplace(parse_alpha(p.at("alpha")), Eigen::Vector2d::Zero()).first;
        it->second += Eigen::Vector2d(v[0].get<double>(), v[1].get<double>());
    }
    return out;
}

std::map<MultiIndex, double> parse_scalar_point(const json& j) {
    std::map<MultiIndex, double> out;
    for (const auto& p : j) {
        const auto& v = p.at("value");
        if (!v.is_array() || v.size() != 1)
            throw FieldError("scalar point 'value' must have one entry");
        out[parse_alpha(p.at("alpha"))] += v[0].get<double>();
    }
    return out;
}

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

struct Runner {
    IsotropicModuli moduli;
    double R = 1.0;
    std::map<std::string, SingularField> fields;
    fs::path out_dir;
    bool all_ok = true;
    std::ostringstream report;
    json results = json::array();

    const SingularField& field(const json& task, const std::string& key) {
        std::string label = task.at(key).get<std::string>();
        auto it = fields.find(label);
        if (it == fields.end())
            throw FieldError("no field with label '" + label + "'");
        return it->second;
    }

    SingularField body_force_of(const json& task) {
        if (task.contains("body_force")) return field(task, "body_force");
        auto B = SingularField::vector(R);
        if (task.contains("body_force_point"))
            for (const auto& [a, v] : parse_vector_point(task.at("body_force_point")))
                B.add_point(a, v);
        B.normalize();
        return B;
    }

    SingularField incompatibility_of(const json& task) {
        if (task.contains("incompatibility"))
            return field(task, "incompatibility");
        auto N = SingularField::scalar(R);
        if (task.contains("incompatibility_point"))
            for (const auto& [a, v] : parse_scalar_point(task.at("incompatibility_point")))
                N.add_point(a, v);
        N.normalize();
        return N;
    }

    void note_verdict(json& rec, const json& task, const CheckReport& rep,
                      const std::string& headline) {
        std::string v = verdict_str(rep.verdict);
        rec["verdict"] = v;
        report << headline << "\n" << rep.text();
        if (task.contains("expect")) {
            std::string expect = task.at("expect").get<std::string>();
            rec["expect"] = expect;
            bool match = expect == v;
            rec["expect_met"] = match;
            if (!match) {
                all_ok = false;
                report << "  EXPECTATION NOT MET (expected " << expect << ")\n";
            }
        }
    }

    json run_task(const json& task) {
        std::string name = task.at("task").get<std::string>();
        json rec;
        rec["task"] = name;
        if (name == "check-equilibrium") {
            auto rep = check_equilibrium(field(task, "stress"), body_force_of(task));
            note_verdict(rec, task, rep, "check-equilibrium");
        } else if (name == "check-compatibility") {
            auto rep = check_compatibility(field(task, "strain"));
            note_verdict(rec, task, rep, "check-compatibility");
        } else if (name == "check-incompatibility") {
            auto rep = check_incompatibility(field(task, "strain"),
                                             incompatibility_of(task));
            note_verdict(rec, task, rep, "check-incompatibility");
        } else if (name == "solve") {
            std::string label = task.at("label").get<std::string>();
            PointSourceProblem p;
            p.moduli = moduli;
            p.domain_radius = R;
            if (task.contains("body_force_point"))
                p.body_force = parse_vector_point(task.at("body_force_point"));
            if (task.contains("incompatibility_point"))
                p.incompatibility = parse_scalar_point(task.at("incompatibility_point"));
            auto s = general_point_solution(p);
            fields.insert_or_assign(label, s);
            rec["label"] = label;
            rec["degree_of_divergence"] =
                std::isfinite(s.degree_of_divergence()) ? json(s.degree_of_divergence())
                                                        : json(nullptr);
            report << "solve: stored stress field '" << label << "'\n";
        } else if (name == "sdeg") {
            const auto& F = field(task, "field");
            int ch = task.at("channel").get<int>();
            if (ch < 0 || ch >= F.channels())
                throw FieldError("sdeg: channel out of range");
            auto G = SingularField::scalar(R);
            for (const auto& t : F.channel(ch)) G.add_term(0, t);
            for (const auto& [a, v] : F.point_part())
                G.add_point(a, value_component(v, ch));
            G.normalize();
            std::vector<double> grid;
            for (int j = 2; j <= 11; ++j) grid.push_back(std::pow(2.0, -j));
            auto est = estimate_scaling_degree(G, grid);
            rec["value"] = est ? json(*est) : json(nullptr);
            report << "sdeg: " << (est ? fmt(*est) : std::string("below noise floor"))
                   << "\n";
        } else if (name == "force") {
            std::string kind = task.at("kind").get<std::string>();
            Eigen::Vector2d F;
            if (kind == "peach-koehler") {
                const auto& bj = task.at("burgers");
                const auto& sj = task.at("sigma0");
                if (bj.size() != 2 || sj.size() != 4)
                    throw FieldError("force: burgers needs 2 entries, sigma0 needs 4");
                Eigen::Vector2d b(bj[0].get<double>(), bj[1].get<double>());
                Eigen::Matrix2d s0;
                s0 << sj[0].get<double>(), sj[1].get<double>(), sj[2].get<double>(),
                    sj[3].get<double>();
                F = peach_koehler(b, s0);
            } else if (kind == "dipole") {
                const auto& bj = task.at("burgers");
                const auto& vj = task.at("direction");
                const auto& sj = task.at("sigma0");
                Eigen::Vector2d b(bj[0].get<double>(), bj[1].get<double>());
                Eigen::Vector2d v(vj[0].get<double>(), vj[1].get<double>());
                Eigen::Matrix2d s0;
                s0 << sj[0].get<double>(), sj[1].get<double>(), sj[2].get<double>(),
                    sj[3].get<double>();
                F = dipole_force_couple(b, v, PolyStress::uniform(s0)).force;
            } else if (kind == "dilation") {
                double a = task.at("strength").get<double>();
                const auto& sj = task.at("sigma0");
                Eigen::Matrix2d s0;
                s0 << sj[0].get<double>(), sj[1].get<double>(), sj[2].get<double>(),
                    sj[3].get<double>();
                F = dilation_force(a, PolyStress::uniform(s0));
            } else {
                throw FieldError("force: unknown kind '" + kind + "'");
            }
            rec["force"] = json::array({F.x(), F.y()});
            report << "force (" << kind << "): [" << fmt(F.x()) << ", " << fmt(F.y())
                   << "]\n";
        } else if (name == "render") {
            const auto& F = field(task, "field");
            int ch = task.at("channel").get<int>();
            const auto& g = task.at("grid");
            std::string file = task.at("file").get<std::string>();
            double guard = task.value("guard_radius", 0.0);
            auto G = SingularField::scalar(R);
            for (const auto& t : F.channel(ch)) G.add_term(0, t);
            G.normalize();
            render_grid(G, g.at("nx").get<int>(), g.at("ny").get<int>(),
                        g.at("xmin").get<double>(), g.at("xmax").get<double>(),
                        g.at("ymin").get<double>(), g.at("ymax").get<double>(), guard,
                        out_dir / file);
            rec["file"] = file;
            report << "render: wrote " << file << "\n";
        } else {
            throw FieldError("unknown task '" + name + "'");
        }
        return rec;
    }
};

} // namespace

void render_grid(const SingularField& F, int nx, int ny, double xmin, double xmax,
                 double ymin, double ymax, double guard_radius,
                 const std::filesystem::path& out_file) {
    if (nx <= 0 || ny <= 0) throw FieldError("render_grid: grid must be non-empty");
    std::ofstream f(out_file);
    if (!f) throw FieldError("render_grid: cannot open " + out_file.string());
    f << std::setprecision(12);
    double dx = (xmax - xmin) / nx, dy = (ymax - ymin) / ny;
    for (int iy = 0; iy < ny; ++iy) {
        double y = ymax - (iy + 0.5) * dy;
        for (int ix = 0; ix < nx; ++ix) {
            double x = xmin + (ix + 0.5) * dx;
            double r = std::hypot(x, y);
            if (ix) f << ",";
            if (r <= guard_radius || r >= F.domain_radius()) {
                f << "nan";
            } else {
                double th = std::atan2(y, x);
                f << value_component(F.eval_smooth(r, th), 0);
            }
        }
        f << "\n";
    }
}

ScenarioResult run_scenario(const std::filesystem::path& scenario_path,
                            const std::filesystem::path& out_dir,
                            const std::string& task_filter) {
    ScenarioResult res;
    json root;
    Runner r;
    try {
        std::ifstream in(scenario_path);
        if (!in) throw FieldError("cannot open scenario file " + scenario_path.string());
        in >> root;
        fs::create_directories(out_dir);
        r.out_dir = out_dir;
        if (root.contains("moduli"))
            r.moduli = IsotropicModuli(root.at("moduli").value("youngs", 1.0),
                                       root.at("moduli").value("poisson", 0.0));
        r.R = root.value("domain_radius", 1.0);
        r.report << "scenario: " << root.value("name", std::string("(unnamed)")) << "\n";
        if (root.contains("fields"))
            for (const auto& [label, spec] : root.at("fields").items())
                r.fields.insert_or_assign(label, parse_field(spec, r.R));
        json tasks = json::array();
        int index = 0;
        for (const auto& task : root.value("tasks", json::array())) {
            std::string name = task.value("task", std::string());
            if (!task_filter.empty() && name != task_filter) {
                ++index;
                continue;
            }
            r.report << "--- task " << index << " (" << name << ") ---\n";
            tasks.push_back(r.run_task(task));
            ++index;
        }
        json out;
        out["name"] = root.value("name", std::string("(unnamed)"));
        out["tasks"] = tasks;
        out["ok"] = r.all_ok;
        res.result_json = out.dump(2) + "\n";
        res.report_text = r.report.str();
        res.exit_status = r.all_ok ? 0 : 1;
    } catch (const std::exception& e) {
        res.report_text = r.report.str() + "error: " + e.what() + "\n";
        json out;
        out["error"] = e.what();
        res.result_json = out.dump(2) + "\n";
        res.exit_status = 2;
    }
    // best-effort persistence (also for error outcomes)
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (!ec) {
        std::ofstream(out_dir / "report.txt") << res.report_text;
        std::ofstream(out_dir / "result.json") << res.result_json;
    }
    return res;
}

} // namespace df2d
