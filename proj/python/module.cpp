#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <sstream>

#include "wulffmc/geometry.hpp"
#include "wulffmc/interaction.hpp"
#include "wulffmc/sampler.hpp"
#include "wulffmc/search.hpp"
#include "wulffmc/serialize.hpp"

namespace py = pybind11;
using namespace wulffmc;

namespace {

// One chain from a fresh random insertion; the module's simulate().
RunResult simulate_once(const Shape& shape, const EnsembleParams& params,
                        const RunSchedule& schedule, std::uint64_t seed, double volume_factor) {
    SimulationState state = initialize_state(shape, params, StepSizes{}, seed, volume_factor);
    return run(state, params, schedule);
}

std::string estimate_repr(const EnergyEstimate& e) {
    std::ostringstream os;
    os << "<" << (e.observable.empty() ? "estimate" : e.observable) << " = " << e.mean << " +/- "
       << e.std_error << " (samples=" << e.samples << ", blocks=" << e.blocks << ")>";
    return os.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Monte Carlo comparison of star-shaped containers by mean equilibrium energy";

    m.attr("REFERENCE_VOLUME") = kReferenceVolume;
    m.attr("HARD_CORE_DIAMETER") = kHardCoreDiameter;
    m.attr("INTERACTION_CUTOFF") = kInteractionCutoff;

    py::register_exception<ShapeError>(m, "ShapeError", PyExc_ValueError);
    py::register_exception<EquilibrationFailure>(m, "EquilibrationFailure", PyExc_RuntimeError);

    py::class_<Shape>(m, "Shape")
        .def_property_readonly("dim", &Shape::dim)
        .def_property_readonly("family", [](const Shape& s) { return family_name(s.family()); })
        .def_property_readonly("scale", &Shape::scale)
        .def_property_readonly("reference_volume", &Shape::reference_volume)
        .def("volume", &Shape::volume)
        .def("sides", &Shape::sides)
        .def("grid_values", &Shape::grid_values)
        .def("max_radius", &Shape::max_radius)
        .def("min_radius", &Shape::min_radius)
        .def("is_canonical", &Shape::is_canonical, py::arg("tol") = 1e-9)
        .def(
            "body_radius",
            [](const Shape& s, double theta) { return s.body_radius(Direction::from_angle(theta)); },
            py::arg("theta"), "radial function at a planar angle (d=2)")
        .def(
            "body_radius",
            [](const Shape& s, double x, double y, double z) {
                return s.body_radius(Direction(Vec{x, y, z}));
            },
            py::arg("x"), py::arg("y"), py::arg("z"), "radial function along a direction vector")
        .def("__eq__", [](const Shape& a, const Shape& b) { return a == b; })
        .def("__repr__", [](const Shape& s) {
            std::ostringstream os;
            os << "<Shape " << family_name(s.family()) << " d=" << s.dim() << ">";
            return os.str();
        });

    m.def(
        "make_shape",
        [](const std::string& descriptor, int dim) {
            return make_shape(ShapeDescriptor{descriptor}, dim);
        },
        py::arg("descriptor"), py::arg("dim"),
        "build a volume-normalized shape from a descriptor: ball, disk, sphere,\n"
        "hexagon, polygon:<k>, cuboctahedron, grid:<m>");
    m.def(
        "canonicalize", [](const Shape& s) { return canonicalize(s); }, py::arg("shape"));
    m.def(
        "normalize_to_volume",
        [](const Shape& s, double target) { return normalize_to_volume(s, target); },
        py::arg("shape"), py::arg("target") = kReferenceVolume);
    m.def("representation_distance", &representation_distance, py::arg("a"), py::arg("b"));
    m.def("radial_grid", &Shape::radial_grid, py::arg("values"), "d=2 shape from angular samples");
    m.def("radial_grid3", &Shape::radial_grid3, py::arg("n_polar"), py::arg("n_azimuth"),
          py::arg("values"), "d=3 shape from a polar-by-azimuth sample grid");
    m.def("shape_record", &shape_record, py::arg("shape"), "text record, bitwise round-trip");
    m.def(
        "parse_shape_record", [](const std::string& text) { return parse_shape_record(text); },
        py::arg("text"));

    m.def("pair_energy", &pair_energy, py::arg("r"),
          "pair potential at separation r; None inside the hard core");
    m.def("lattice_energy_per_particle", &lattice_energy_per_particle, py::arg("spacing"));
    m.def(
        "minimize_lattice_energy",
        [](double lo, double hi, std::size_t points) {
            const LatticeMinimum mn = minimize_lattice_energy(lo, hi, points);
            return py::make_tuple(mn.spacing, mn.energy);
        },
        py::arg("lo") = 1.0, py::arg("hi") = 3.0, py::arg("points") = 2001,
        "(spacing, energy) at the grid argmin");

    py::class_<EnsembleParams>(m, "EnsembleParams")
        .def(py::init<>())
        .def_readwrite("dimension", &EnsembleParams::dimension)
        .def_readwrite("particles", &EnsembleParams::particles)
        .def_readwrite("beta", &EnsembleParams::beta)
        .def_readwrite("pressure", &EnsembleParams::pressure)
        .def_readwrite("ideal_gas", &EnsembleParams::ideal_gas)
        .def_readwrite("volume_cap", &EnsembleParams::volume_cap)
        .def("validate", &EnsembleParams::validate)
        .def("kinetic_mean", &EnsembleParams::kinetic_mean);

    py::class_<RunSchedule>(m, "RunSchedule")
        .def(py::init<>())
        .def_readwrite("burnin_sweeps", &RunSchedule::burnin_sweeps)
        .def_readwrite("measurement_sweeps", &RunSchedule::measurement_sweeps)
        .def_readwrite("thinning", &RunSchedule::thinning)
        .def_readwrite("volume_move_fraction", &RunSchedule::volume_move_fraction)
        .def_readwrite("blocks", &RunSchedule::blocks)
        .def_readwrite("accept_low", &RunSchedule::accept_low)
        .def_readwrite("accept_high", &RunSchedule::accept_high)
        .def_readwrite("tune_interval", &RunSchedule::tune_interval)
        .def("validate", &RunSchedule::validate);

    py::class_<EnergyEstimate>(m, "EnergyEstimate")
        .def_readonly("observable", &EnergyEstimate::observable)
        .def_readonly("mean", &EnergyEstimate::mean)
        .def_readonly("std_error", &EnergyEstimate::std_error)
        .def_readonly("samples", &EnergyEstimate::samples)
        .def_readonly("blocks", &EnergyEstimate::blocks)
        .def("__repr__", &estimate_repr);

    py::class_<MoveCounters>(m, "MoveCounters")
        .def_property_readonly("displacement_rate", &MoveCounters::displacement_rate)
        .def_property_readonly("volume_rate", &MoveCounters::volume_rate);

    py::class_<RunResult>(m, "RunResult")
        .def_readonly("potential", &RunResult::potential)
        .def_readonly("volume", &RunResult::volume)
        .def_readonly("total", &RunResult::total)
        .def_readonly("counters", &RunResult::counters);

    m.def("simulate", &simulate_once, py::arg("shape"), py::arg("params"), py::arg("schedule"),
          py::arg("seed"), py::arg("volume_factor") = 4.0,
          py::call_guard<py::gil_scoped_release>(),
          "run one chain from a fresh random insertion and return pooled estimates");

    py::class_<EstimateOptions>(m, "EstimateOptions")
        .def(py::init<>())
        .def_readwrite("replicas", &EstimateOptions::replicas)
        .def_readwrite("seeds", &EstimateOptions::seeds)
        .def_readwrite("consistency_z", &EstimateOptions::consistency_z)
        .def_readwrite("volume_factor", &EstimateOptions::volume_factor)
        .def_readwrite("jobs", &EstimateOptions::jobs);

    py::class_<ReplicaSummary>(m, "ReplicaSummary")
        .def_readonly("seed", &ReplicaSummary::seed)
        .def_readonly("energy_mean", &ReplicaSummary::energy_mean)
        .def_readonly("energy_se", &ReplicaSummary::energy_se)
        .def_readonly("disp_rate", &ReplicaSummary::disp_rate)
        .def_readonly("vol_rate", &ReplicaSummary::vol_rate);

    py::class_<ShapeEstimate>(m, "ShapeEstimate")
        .def_readonly("shape", &ShapeEstimate::shape)
        .def_readonly("energy", &ShapeEstimate::energy)
        .def_readonly("potential", &ShapeEstimate::potential)
        .def_readonly("volume", &ShapeEstimate::volume)
        .def_readonly("replicas", &ShapeEstimate::replicas);

    m.def("estimate_shape", &estimate_shape, py::arg("shape"), py::arg("params"),
          py::arg("schedule"), py::arg("options"), py::call_guard<py::gil_scoped_release>());
    m.def("estimate_mean_energy", &estimate_mean_energy, py::arg("shape"), py::arg("params"),
          py::arg("schedule"), py::arg("options"), py::call_guard<py::gil_scoped_release>());

    py::enum_<Verdict>(m, "Verdict")
        .value("LOWER", Verdict::Lower)
        .value("HIGHER", Verdict::Higher)
        .value("INDISTINGUISHABLE", Verdict::Indistinguishable);
    m.def("verdict_name", &verdict_name, py::arg("verdict"));

    py::class_<PairVerdict>(m, "PairVerdict")
        .def_readonly("first", &PairVerdict::first)
        .def_readonly("second", &PairVerdict::second)
        .def_readonly("delta", &PairVerdict::delta)
        .def_readonly("se", &PairVerdict::se)
        .def_readonly("verdict", &PairVerdict::verdict);

    py::class_<ShapeComparison>(m, "ShapeComparison")
        .def_readonly("entries", &ShapeComparison::entries)
        .def_readonly("pairs", &ShapeComparison::pairs)
        .def_readonly("z", &ShapeComparison::z);

    py::class_<CompareOptions>(m, "CompareOptions")
        .def(py::init<>())
        .def_readwrite("replicas", &CompareOptions::replicas)
        .def_readwrite("base_seed", &CompareOptions::base_seed)
        .def_readwrite("consistency_z", &CompareOptions::consistency_z)
        .def_readwrite("verdict_z", &CompareOptions::verdict_z)
        .def_readwrite("volume_factor", &CompareOptions::volume_factor)
        .def_readwrite("jobs", &CompareOptions::jobs);

    m.def("compare_shapes", &compare_shapes, py::arg("shapes"), py::arg("params"),
          py::arg("schedule"), py::arg("options"), py::call_guard<py::gil_scoped_release>());

    py::class_<PressureScanRow>(m, "PressureScanRow")
        .def_readonly("pressure", &PressureScanRow::pressure)
        .def_readonly("comparison", &PressureScanRow::comparison);

    py::class_<TrendRow>(m, "TrendRow")
        .def_readonly("first", &TrendRow::first)
        .def_readonly("second", &TrendRow::second)
        .def_readonly("signs", &TrendRow::signs);

    py::class_<PressureScan>(m, "PressureScan")
        .def_readonly("rows", &PressureScan::rows)
        .def_readonly("trends", &PressureScan::trends);

    m.def("pressure_scan", &pressure_scan, py::arg("shapes"), py::arg("params"),
          py::arg("pressures"), py::arg("schedule"), py::arg("options"),
          py::arg("on_row") = ScanRowObserver{}, py::call_guard<py::gil_scoped_release>(),
          "chains persist across ascending pressures; on_row sees each finished row");

    py::class_<SearchConfig>(m, "SearchConfig")
        .def(py::init<>())
        .def_readwrite("basis_modes", &SearchConfig::basis_modes)
        .def_readwrite("grid_resolution", &SearchConfig::grid_resolution)
        .def_readwrite("step", &SearchConfig::step)
        .def_readwrite("budget", &SearchConfig::budget)
        .def_readwrite("patience", &SearchConfig::patience)
        .def_readwrite("shrink_after", &SearchConfig::shrink_after)
        .def_readwrite("step_shrink", &SearchConfig::step_shrink)
        .def_readwrite("crn_replicas", &SearchConfig::crn_replicas)
        .def_readwrite("base_seed", &SearchConfig::base_seed)
        .def_readwrite("volume_factor", &SearchConfig::volume_factor);

    py::class_<SearchIteration>(m, "SearchIteration")
        .def_readonly("index", &SearchIteration::index)
        .def_readonly("accepted", &SearchIteration::accepted)
        .def_readonly("objective", &SearchIteration::objective)
        .def_readonly("step", &SearchIteration::step);

    py::class_<ShapeSearchState>(m, "ShapeSearchState")
        .def_readonly("shape", &ShapeSearchState::shape)
        .def_readonly("coefficients", &ShapeSearchState::coefficients)
        .def_readonly("objective", &ShapeSearchState::objective)
        .def_readonly("trace", &ShapeSearchState::trace)
        .def_readonly("budget_exhausted", &ShapeSearchState::budget_exhausted);

    m.def("local_shape_search", &local_shape_search, py::arg("start"), py::arg("params"),
          py::arg("schedule"), py::arg("config"), py::call_guard<py::gil_scoped_release>(),
          "coefficient descent under common random numbers; strict improvement only");

    m.def("derive_seeds", &derive_seeds, py::arg("base"), py::arg("stream"), py::arg("count"),
          "per-replica seed streams, the same derivation the estimators use");
}
