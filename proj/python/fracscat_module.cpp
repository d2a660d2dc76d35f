#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "fracscat/postprocess.hpp"
#include "fracscat/prefractal.hpp"

namespace py = pybind11;
using namespace fracscat;

namespace {

std::shared_ptr<const IfsAttractor> geometry_by_name(const std::string& name, double h0) {
    if (name == "fudgeflake") return std::make_shared<const IfsAttractor>(make_fudgeflake());
    if (name == "gosper") return std::make_shared<const IfsAttractor>(make_gosper());
    if (name == "koch") return std::make_shared<const IfsAttractor>(make_koch_snowflake(h0));
    throw std::invalid_argument("unknown geometry '" + name + "'");
}

WaveParams make_params(double k, Cplx m, const std::string& incident,
                       std::pair<double, double> direction, std::pair<double, double> source) {
    WaveParams wp;
    wp.k = k;
    wp.m = m;
    if (incident == "plane") {
        wp.incident = WaveParams::Incident::PlaneWave;
        Vec2 d{direction.first, direction.second};
        if (d.norm() == 0.0) throw std::invalid_argument("direction must be nonzero");
        wp.direction = d * (1.0 / d.norm());
    } else if (incident == "point") {
        wp.incident = WaveParams::Incident::PointSource;
        wp.source = Vec2{source.first, source.second};
    } else if (incident == "constant") {
        wp.incident = WaveParams::Incident::Constant;
    } else {
        throw std::invalid_argument("unknown incident field '" + incident + "'");
    }
    wp.validate();
    return wp;
}

// One scattering problem: geometry + mesh level + wave parameters, solved on
// construction; evaluation methods reuse the factorised solution.
class Problem {
public:
    Problem(const std::string& geometry, int level, double k, Cplx m, int alpha,
            const std::string& incident, std::pair<double, double> direction,
            std::pair<double, double> source, const std::string& solver, double h0)
        : ifs_(geometry_by_name(geometry, h0)),
          mesh_(build_lh_mesh(ifs_, mesh_level_sequence(*ifs_, level).at(level))),
          split_(classify_pairs(mesh_)),
          sys_(CanonicalSystem::derive(ifs_)),
          pol_(QuadPolicy::make(alpha, mesh_.h(), ifs_->diam())),
          gal_(assemble_system(mesh_, split_, make_params(k, m, incident, direction, source),
                               pol_, sys_)) {
        if (solver == "dense") {
            rep_ = solve_dense(gal_);
        } else if (solver == "gmres") {
            LatticeOperator op(mesh_, split_, gal_.params, pol_, sys_);
            rep_ = gmres([&](const Eigen::VectorXcd& x) { return op.apply(x); }, gal_.g);
        } else {
            throw std::invalid_argument("unknown solver '" + solver + "'");
        }
    }

    int size() const { return mesh_.size(); }
    double h() const { return mesh_.h(); }
    const Eigen::VectorXcd& coefficients() const { return rep_.coefficients; }
    const Eigen::VectorXcd& load() const { return gal_.g; }
    int iterations() const { return rep_.iterations; }
    double residual() const { return rep_.residual_norm; }
    std::string method() const { return rep_.method; }
    double condition() const { return condition_estimate(gal_.A); }

    std::vector<std::pair<double, double>> nodes() const {
        std::vector<std::pair<double, double>> out;
        for (const MeshElement& el : mesh_.elements()) out.push_back({el.node.x, el.node.y});
        return out;
    }

    std::vector<Cplx> far_field_at(const std::vector<double>& angles) const {
        return far_field(rep_.coefficients, mesh_, gal_.params, pol_, angles).values;
    }

    std::vector<Cplx> scattered_at(const std::vector<std::pair<double, double>>& points) const {
        std::vector<Vec2> pts;
        for (const auto& p : points) pts.push_back(Vec2{p.first, p.second});
        std::vector<Cplx> out;
        for (const FieldSample& s : scattered_field(rep_.coefficients, mesh_, gal_.params, pol_, pts)) {
            if (!s.ok) throw std::runtime_error("field evaluation failed");
            out.push_back(s.value);
        }
        return out;
    }

    std::vector<Cplx> total_at(const std::vector<std::pair<double, double>>& points) const {
        std::vector<Vec2> pts;
        for (const auto& p : points) pts.push_back(Vec2{p.first, p.second});
        std::vector<Cplx> out;
        for (const FieldSample& s : total_field(rep_.coefficients, mesh_, gal_.params, pol_, pts)) {
            if (!s.ok) throw std::runtime_error("field evaluation failed");
            out.push_back(s.value);
        }
        return out;
    }

private:
    std::shared_ptr<const IfsAttractor> ifs_;
    LhMesh mesh_;
    InteractionSplit split_;
    CanonicalSystem sys_;
    QuadPolicy pol_;
    GalerkinSystem gal_;
    SolveReport rep_;
};

} // namespace

PYBIND11_MODULE(_fracscat, mod) {
    mod.doc() = "acoustic scattering by self-similar penetrable fractals";

    mod.def("geometries", [] { return std::vector<std::string>{"fudgeflake", "gosper", "koch"}; });

    mod.def(
        "geometry_info",
        [](const std::string& name, double h0) {
            auto ifs = geometry_by_name(name, h0);
            py::dict d;
            d["name"] = ifs->name();
            d["num_maps"] = ifs->num_maps();
            d["measure"] = ifs->measure();
            d["diam"] = ifs->diam();
            d["barycentre"] = std::pair{ifs->barycentre().x, ifs->barycentre().y};
            d["bounding_radius"] = ifs->bounding_radius();
            return d;
        },
        py::arg("name"), py::arg("h0") = 2.0 / 1.7320508075688772935);

    mod.def(
        "mesh_sizes",
        [](const std::string& name, int max_level) {
            auto ifs = geometry_by_name(name, 2.0 / 1.7320508075688772935);
            std::vector<int> out;
            for (double h : mesh_level_sequence(*ifs, max_level))
                out.push_back(build_lh_mesh(*ifs, h).size());
            return out;
        },
        py::arg("name"), py::arg("max_level"));

    mod.def("prefractal_count", &prefractal_count, py::arg("level"));

    py::class_<Problem>(mod, "Problem")
        .def(py::init<const std::string&, int, double, Cplx, int, const std::string&,
                      std::pair<double, double>, std::pair<double, double>, const std::string&,
                      double>(),
             py::arg("geometry"), py::arg("level"), py::arg("k"), py::arg("m"),
             py::arg("alpha") = 1, py::arg("incident") = "plane",
             py::arg("direction") = std::pair<double, double>{0.0, 1.0},
             py::arg("source") = std::pair<double, double>{0.0, 0.0},
             py::arg("solver") = "dense", py::arg("h0") = 2.0 / 1.7320508075688772935)
        .def_property_readonly("size", &Problem::size)
        .def_property_readonly("h", &Problem::h)
        .def_property_readonly("coefficients", &Problem::coefficients)
        .def_property_readonly("load", &Problem::load)
        .def_property_readonly("iterations", &Problem::iterations)
        .def_property_readonly("residual", &Problem::residual)
        .def_property_readonly("method", &Problem::method)
        .def("nodes", &Problem::nodes)
        .def("condition", &Problem::condition)
        .def("far_field", &Problem::far_field_at, py::arg("angles"))
        .def("scattered_field", &Problem::scattered_at, py::arg("points"))
        .def("total_field", &Problem::total_at, py::arg("points"));
}
