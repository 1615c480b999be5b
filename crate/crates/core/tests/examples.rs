macro_rules! example {
    ($module:ident, $test:ident) => {
        #[allow(dead_code)]
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", stringify!($module), ".rs"));
        }

        #[test]
        fn $test() {
            $module::run_example().expect(concat!(stringify!($module), " example should run"));
        }
    };
}

example!(pick_feasibility, pick_feasibility_runs);
example!(schur_synthesis, schur_synthesis_runs);
example!(minimal_norm, minimal_norm_runs);
example!(peak_functions, peak_functions_runs);
example!(boundary_interpolation, boundary_interpolation_runs);
example!(combined_interpolation, combined_interpolation_runs);
example!(certify_roundtrip, certify_roundtrip_runs);
example!(abstract_engine, abstract_engine_runs);
