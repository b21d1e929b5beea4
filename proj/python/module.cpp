// SPDX-License-Identifier: Apache-2.0
//
// polara - polarization-aware rotatable antenna simulation and optimization
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "polara/ao.hpp"
#include "polara/config.hpp"
#include "polara/harness.hpp"
#include "polara/los_analysis.hpp"
#include "polara/scenario.hpp"
#include "polara/verify.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace polara;

namespace
{
    py::dict solve(const std::string &config_json, std::uint64_t seed, const std::string &scheme)
    {
        const SweepConfig cfg = parse_config(config_json);
        SolutionState s;
        {
            py::gil_scoped_release release;
            const Scene scene = generate_scene(cfg.scenario, seed);
            s = scheme_variant(scene, cfg.ao, scheme_from_string(scheme));
        }
        py::dict out;
        out["scheme"] = scheme;
        out["feasible"] = s.feasible;
        out["converged"] = s.converged;
        out["power_w"] = s.power();
        out["power_trace"] = s.power_trace;
        out["W"] = s.W;
        out["R"] = s.R;
        out["V"] = s.V;
        out["U"] = s.U;
        return out;
    }

    std::string sweep_csv(const std::string &config_json)
    {
        const SweepConfig cfg = parse_config(config_json);
        SweepResult r;
        {
            py::gil_scoped_release release;
            r = run_sweep(cfg);
        }
        std::ostringstream os;
        write_sweep_csv(os, r);
        return os.str();
    }

    py::dict heatmap(double plane_z, double extent, int grid_n, double p)
    {
        const los::Heatmap m = los::coverage_heatmap(plane_z, extent, grid_n, p);
        py::dict out;
        out["grid_n"] = m.grid_n;
        out["x"] = m.x;
        out["y"] = m.y;
        out["fixed_db"] = m.fixed_db;
        out["rotated_db"] = m.rotated_db;
        return out;
    }

    py::list verify_suites(const std::string &level)
    {
        verify::Options opt;
        if (level == "full")
            opt.level = verify::Level::full;
        else if (level != "fast")
            throw std::invalid_argument("verify: level must be 'fast' or 'full'");
        py::list out;
        for (const verify::SuiteReport &r : verify::run_all(opt))
        {
            py::dict d;
            d["name"] = r.name;
            d["passed"] = r.passed;
            d["detail"] = r.detail;
            d["seconds"] = r.seconds;
            out.append(d);
        }
        return out;
    }
}

PYBIND11_MODULE(_polara, m)
{
    m.doc() = "polarization-aware rotatable antenna optimization";

    m.def("eta_star", &los::eta_star, py::arg("t"));
    m.def("eta_fixed", &los::eta_fixed, py::arg("f"));
    m.def("eta_rot", &los::eta_rot, py::arg("f"));
    m.def("optimal_rotation_los", &los::optimal_rotation_los, py::arg("f"));
    m.def(
        "gain_ratio_db",
        [](const Vec3 &f, double p) {
            const los::GainRatio g = los::gain_ratio(f, p);
            return py::make_tuple(g.directional_db, g.polarization_db, g.total_db);
        },
        py::arg("f"), py::arg("p") = 2.0);
    m.def("coverage_heatmap", &heatmap, py::arg("plane_z") = 30.0, py::arg("extent") = 100.0, py::arg("grid_n") = 201,
          py::arg("p") = 2.0);

    m.def("geodesic_from_z", &geodesic_from_z, py::arg("b"));
    m.def("project_so3", &project_so3, py::arg("Y"));

    py::class_<Scene>(m, "Scene")
        .def_property_readonly("num_antennas", &Scene::num_antennas)
        .def_property_readonly("num_users", &Scene::num_users)
        .def_property_readonly("num_scatterers", &Scene::num_scatterers)
        .def_property_readonly("antennas", [](const Scene &s) { return s.layout().antennas; })
        .def_property_readonly("users", [](const Scene &s) { return s.layout().users; })
        .def_property_readonly("scatterers", [](const Scene &s) { return s.layout().scatterers; })
        .def_property_readonly("noise_w", &Scene::noise)
        .def("channels",
             [](const Scene &s, const RotationSet &R, const TxPolSet &V, const RxPolSet &U) {
                 return assemble_channels(R, V, U, s).H;
             },
             py::arg("R"), py::arg("V"), py::arg("U"));

    m.def(
        "generate_scene",
        [](const std::string &config_json, std::uint64_t seed) { return generate_scene(parse_config(config_json).scenario, seed); },
        py::arg("config_json") = "{}", py::arg("seed") = 1);

    m.def("default_config_json", &default_config_json);
    m.def("solve", &solve, py::arg("config_json") = "{}", py::arg("seed") = 1, py::arg("scheme") = "proposed");
    m.def("sweep_csv", &sweep_csv, py::arg("config_json"));
    m.def("verify", &verify_suites, py::arg("level") = "fast");
}
