use compton_witness::optim::RestartConfig;
use compton_witness::states::ortho_reduced;
use compton_witness::witness::*;

#[test]
fn scratch_free_windows_op() {
    let setting = ComptonSetting::symmetric(2.0 / 3.0, 85f64.to_radians());
    let opt = RestartConfig { n_restarts: 24, ..Default::default() };
    for p in [0.0, 0.5, 1.0] {
        let rho = ortho_reduced(p).unwrap().rho;
        let r = mub_witness_compton_free_windows(&rho, &setting, true, &opt).unwrap();
        println!("ortho p={p}: free-window I3 = {} (expect 2.1428)", r.value);
    }
    let sep = separable_ceiling_compton(&setting, true, &opt).unwrap();
    println!("sep ceiling (rigid): {} (expect 1.8214)", sep.value);
}
