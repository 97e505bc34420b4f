#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "lrcs/container.hpp"
#include "lrcs/dataset.hpp"
#include "lrcs/error.hpp"
#include "lrcs/hierarchical.hpp"
#include "lrcs/run_config.hpp"
#include "lrcs/tracking.hpp"

namespace py = pybind11;
using namespace lrcs;

namespace {

// JSON crosses the boundary as text; the Python package decodes it.
std::string dump(const nlohmann::json& j) { return j.dump(); }

nlohmann::json parse(const std::string& text, const char* what) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string(what) + ": " + e.what());
    }
}

MeasurementSet to_measurements(const std::vector<ComplexVector>& frames) { return MeasurementSet{frames}; }

py::dict run_result(const ComplexMatrix& z, const ReconReport& report, bool with_timing) {
    py::dict out;
    out["z"] = z;
    out["report"] = dump(report.to_json(with_timing));
    return out;
}

py::dict reconstruct_dataset(const Dataset& data, const std::string& config_json, bool with_timing) {
    const RunConfig cfg = RunConfig::from_json(parse(config_json, "run config"));
    const ComplexMatrix* truth = data.truth ? &*data.truth : nullptr;
    ComplexMatrix z;
    ReconReport report;
    {
        py::gil_scoped_release release;
        if (cfg.is_tracking()) {
            TrackResult r = run_tracker(data.y, data.ops, cfg.tracker(), truth);
            z = std::move(r.z);
            report = std::move(r.report);
        } else {
            ReconResult r = reconstruct(data.y, data.ops, cfg.recon, {truth, std::nullopt});
            z = std::move(r.z);
            report = std::move(r.report);
        }
    }
    report.config = cfg.to_json();
    return run_result(z, report, with_timing);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Hierarchical low-rank reconstruction of undersampled dynamic MRI";

    auto base = py::register_exception<Error>(m, "LrcsError", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    auto data_error = py::register_exception<DataError>(m, "DataError", base.ptr());
    py::register_exception<SolverError>(m, "SolverError", base.ptr());
    py::register_exception<ContainerError>(m, "ContainerError", data_error.ptr());

    m.def("nsmse", &nsmse, py::arg("truth"), py::arg("estimate"),
          "Scale-invariant normalized squared error, per-column optimal complex scaling.");

    py::class_<Dataset>(m, "Dataset")
        .def_readonly("n1", &Dataset::n1)
        .def_readonly("n2", &Dataset::n2)
        .def_property_readonly("frames", [](const Dataset& d) { return d.y.size(); })
        .def_property_readonly("truth", [](const Dataset& d) -> py::object {
            return d.truth ? py::cast(*d.truth) : py::none();
        })
        .def_property_readonly("measurements", [](const Dataset& d) { return d.y.frames; })
        .def_property_readonly("manifest", [](const Dataset& d) { return dump(d.manifest); })
        .def("apply", [](const Dataset& d, const ComplexMatrix& z) { return apply_seq(d.ops, z).frames; },
             py::arg("z"), "Measurements of an n x q image sequence under this acquisition.")
        .def("adjoint",
             [](const Dataset& d, const std::vector<ComplexVector>& y) {
                 return adjoint_seq(d.ops, to_measurements(y));
             },
             py::arg("y"))
        .def("zero_filled", [](const Dataset& d) { return zero_filled(d.y, d.ops); })
        .def("with_measurements",
             [](const Dataset& d, const std::vector<ComplexVector>& y) {
                 Dataset copy = d;
                 copy.y = to_measurements(y);
                 if (copy.y.size() != static_cast<Index>(d.ops.size()))
                     throw DataError("with_measurements: frame count does not match the operators");
                 copy.truth.reset();
                 return copy;
             },
             py::arg("y"), "Same operators, new k-space; drops the ground truth.");

    m.def("_synthesize", [](const std::string& spec_json) {
        return synthesize(DatasetSpec::from_json(parse(spec_json, "dataset spec")));
    });
    m.def("_reconstruct", &reconstruct_dataset, py::arg("data"), py::arg("config"), py::arg("with_timing"));
    m.def("save_dataset", &save_dataset, py::arg("dir"), py::arg("data"));
    m.def("load_dataset", &load_dataset, py::arg("dir"));

    m.def("read_images", [](const std::filesystem::path& p) {
        const ImageSequence s = read_image_sequence(p);
        return py::make_tuple(s.n1, s.n2, s.frames);
    }, py::arg("path"), "Returns (n1, n2, frames) with frames an n x q array.");
    m.def("write_images",
          [](const std::filesystem::path& p, Index n1, Index n2, const ComplexMatrix& frames) {
              write_image_sequence(p, {n1, n2, frames});
          },
          py::arg("path"), py::arg("n1"), py::arg("n2"), py::arg("frames"));
}
