mod frontend_sessions {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/frontend_sessions.rs"));
}

mod subtyping {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/subtyping.rs"));
}

mod fsm_candidates {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/fsm_candidates.rs"));
}

mod binding_check {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/binding_check.rs"));
}

mod scenario_suite {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/scenario_suite.rs"));
}

mod interconnect {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/interconnect.rs"));
}

mod floorplan {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/floorplan.rs"));
}

mod pipeline {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/pipeline.rs"));
}

mod http_service {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/http_service.rs"));
}

#[test]
fn frontend_sessions_runs() {
    frontend_sessions::run_example().expect("frontend_sessions example failed");
}

#[test]
fn subtyping_runs() {
    subtyping::run_example().expect("subtyping example failed");
}

#[test]
fn fsm_candidates_runs() {
    fsm_candidates::run_example().expect("fsm_candidates example failed");
}

#[test]
fn binding_check_runs() {
    binding_check::run_example().expect("binding_check example failed");
}

#[test]
fn scenario_suite_runs() {
    scenario_suite::run_example().expect("scenario_suite example failed");
}

#[test]
fn interconnect_runs() {
    interconnect::run_example().expect("interconnect example failed");
}

#[test]
fn floorplan_runs() {
    floorplan::run_example().expect("floorplan example failed");
}

#[test]
fn pipeline_runs() {
    pipeline::run_example().expect("pipeline example failed");
}

#[test]
fn http_service_runs() {
    http_service::run_example().expect("http_service example failed");
}
