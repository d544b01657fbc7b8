use smib_core::cdm::{cdm_outputs, cdm_rhs, derive_cdm_coefficients, CdmCoefficients};
use smib_core::eig::eigenvalues;
use smib_core::equilibrium::{find_equilibrium, linearize_cdm, plant_equilibrium};
use smib_core::fl::{
    reconstruct_eq_prime_a, reconstruct_eq_prime_b, relative_degree_check, transform_state,
};
use smib_core::mat::Matrix;
use smib_core::params::MachineParams;
use smib_core::plant::{derive_plant_coefficients, plant_outputs, plant_rhs, PlantCoefficients};

fn cdm() -> CdmCoefficients {
    derive_cdm_coefficients(&MachineParams::default()).unwrap()
}

fn plant() -> PlantCoefficients {
    derive_plant_coefficients(&MachineParams::default()).unwrap()
}

const OPI_GUESS_CDM: (f64, f64) = (1.1, 1.0);
const OPII_GUESS_CDM: (f64, f64) = (1.6, 0.9);
const OPI_GUESS_PLANT: [f64; 7] = [-0.92, 1.63, 0.0, 0.40, 0.0, 1.0, 0.0012];
const OPII_GUESS_PLANT: [f64; 7] = [-1.43, 2.38, 0.0, 0.37, 0.0, 0.89, 0.0018];

#[test]
fn cdm_coefficients_cross_check() {
    // independently computed from the machine data (double precision)
    let c = cdm();
    let expected = [
        (c.f11, -0.5517166779557998),
        (c.f12, 0.382225152532071),
        (c.f13, 0.003747305416981088),
        (c.f21, -0.01013701191441259),
        (c.f22, 0.017068272968241364),
        (c.f23, -0.3268506807000626),
        (c.f24, 0.2234652154462345),
        (c.f25, -0.006931261053828772),
        (c.f26, 0.0021915016567252738),
        (c.f27, 0.0),
        (c.f28, 0.21097046413502107),
        (c.f41, -2.0),
        (c.f42, 2.0),
        (c.f51, -0.25),
        (c.f52, -5.0),
        (c.g11, 0.1694915254237288),
        (c.g55, 5.0),
        (c.vd1, -0.024920224889834367),
        (c.vd2, 0.024920224889834367),
        (c.vd3, -0.8036772526971585),
        (c.vq1, -0.3797295243883908),
        (c.vq2, 0.3797295243883908),
        (c.vq3, 0.0037228384743959882),
        (c.e14, 1.55),
        (c.e15, 0.00047870967741935484),
        (c.l2, 1.455),
        (c.r31, -0.0034362752252246067),
        (c.r32, 0.0028929276217358243),
        (c.r33, -0.05539842045763773),
        (c.r51, 10.0),
        (c.p51, -0.5),
        (c.p52, 4.0),
        (c.p53, -14.0),
        (c.tau_d0_prime, 5.9),
        (c.l_d_prime, 0.245),
        (c.tau_j, 4.74),
    ];
    for (got, want) in expected {
        assert!((got - want).abs() <= 1e-12 * (1.0 + want.abs()), "{got} vs {want}");
    }
}

#[test]
fn cdm_coefficients_match_published_rounding() {
    // published values are rounded to 4 decimals
    let c = cdm();
    let published = [
        (c.f11, -0.5517),
        (c.f12, 0.3822),
        (c.f13, 0.0037),
        (c.f21, -0.0101),
        (c.f22, 0.0171),
        (c.f23, -0.3269),
        (c.f24, 0.2235),
        (c.f25, -0.0069),
        (c.f26, 0.0022),
        (c.f27, 0.0),
        (c.f28, 0.2110),
        (c.f41, -2.0),
        (c.f42, 2.0),
        (c.f51, -0.25),
        (c.f52, -5.0),
        (c.g11, 0.1695),
        (c.g55, 5.0),
        (c.vd1, -0.0249),
        (c.vd2, 0.0249),
        (c.vd3, -0.8037),
        (c.vq1, -0.3797),
        (c.vq2, 0.3797),
        (c.vq3, 0.0037),
    ];
    for (got, want) in published {
        assert!((got - want).abs() <= 5e-5, "{got} vs published {want}");
    }
    assert!((c.tau_j - 4.74).abs() <= 5e-5);
    assert!((c.l_d_prime - 0.245).abs() <= 5e-5);
}

#[test]
fn plant_coefficients_cross_check() {
    let c = plant();
    let expected = [
        (c.f11, -0.03608067507612022),
        (c.f12, 0.0004402296650717715),
        (c.f13, 0.014131361461505072),
        (c.f14, -3.4890300130491685),
        (c.f15, -2.5483601565898337),
        (c.f16, 1.710308829926063),
        (c.f21, 0.012516287081339745),
        (c.f31, 0.022756885602435953),
        (c.f41, 3.5888189576007337),
        (c.f44, -0.03605224987121194),
        (c.f51, -3.50415481443322),
        (c.f66, 0.21097046413502107),
        (c.f81, -2.0),
        (c.f82, 2.0),
        (c.f91, -0.25),
        (c.f92, -5.0),
        (c.g11, -0.5933014354067001),
        (c.g21, 6.736842105263198),
        (c.g31, -5.933014354067022),
        (c.g92, 5.0),
        (c.y11, 0.005567729969551911),
        (c.y12, 0.00017609186602870862),
        (c.y13, 0.005652544584602029),
        (c.y14, -0.9956120052196674),
        (c.y15, -1.0193440626359336),
        (c.y16, -0.3158764680295748),
        (c.i11, -0.23732057416268004),
        (c.y21, 1.0355275830402935),
        (c.y22, 1.059556073196407),
        (c.y23, 1.059556073196407),
        (c.y24, 0.005579100051515224),
        (c.y25, 0.03604273523417026),
        (c.y26, 0.3164154366474793),
        (c.mu, -0.14368749999999914),
        (c.nu, 0.8929400000000003),
        (c.tau_j, 4.74),
    ];
    for (got, want) in expected {
        assert!((got - want).abs() <= 1e-9 * (1.0 + want.abs()), "{got} vs {want}");
    }
}

#[test]
fn cdm_equilibria_match_table() {
    let c = cdm();
    let op1 = find_equilibrium(&c, 1.0012, 1.17233, OPI_GUESS_CDM).unwrap();
    let tight1 = [
        (op1.x0[0], 1.1917599960885161),
        (op1.x0[2], 1.0011773930449237),
        (op1.u0[0], 2.5297074787922456),
        (op1.u0[1], 1.0512),
        (op1.vt0, 1.17233),
    ];
    for (got, want) in tight1 {
        assert!((got - want).abs() < 1e-8, "{got} vs {want}");
    }
    // published rounded values, abs tolerance 2e-3
    assert!((op1.x0[0] - 1.1925).abs() < 2e-3);
    assert!((op1.x0[2] - 1.0).abs() < 2e-3);
    assert!((op1.u0[0] - 2.529).abs() < 2e-3);

    let op2 = find_equilibrium(&c, 1.34899, 1.39899, OPII_GUESS_CDM).unwrap();
    let tight2 = [
        (op2.x0[0], 1.607207614011665),
        (op2.x0[2], 0.8885041465643826),
        (op2.u0[0], 3.6874506110204726),
        (op2.u0[1], 1.39899),
    ];
    for (got, want) in tight2 {
        assert!((got - want).abs() < 1e-8, "{got} vs {want}");
    }
    assert!((op2.x0[0] - 1.6078).abs() < 2e-3);
    assert!((op2.x0[2] - 0.88676).abs() < 2e-3);

    // equilibrium residuals vanish
    for op in [&op1, &op2] {
        let dx = cdm_rhs(&c, &op.x0, op.u0, 1.0);
        assert!(dx.iter().all(|v| v.abs() < 1e-10));
    }
}

#[test]
fn cdm_outputs_at_operating_points() {
    let c = cdm();
    let op1 = find_equilibrium(&c, 1.0012, 1.17233, OPI_GUESS_CDM).unwrap();
    let (vt, vd, vq) = cdm_outputs(&c, &op1.x0, 1.0);
    assert!((vt - 1.17233).abs() < 1e-10);
    assert!((vd - -0.663546244824994).abs() < 1e-9);
    assert!((vq - 0.9664698701349672).abs() < 1e-9);
    let op2 = find_equilibrium(&c, 1.34899, 1.39899, OPII_GUESS_CDM).unwrap();
    let (vt2, _, _) = cdm_outputs(&c, &op2.x0, 1.0);
    assert!((vt2 - 1.39899).abs() < 1e-10);
}

#[test]
fn plant_equilibria_match_table() {
    let pc = plant();
    let op1 = plant_equilibrium(&pc, 1.0012, 1.17233, &OPI_GUESS_PLANT).unwrap();
    let tight1 = [
        (op1.x0[0], -0.9184585937437596),
        (op1.x0[1], 1.6315065385524878),
        (op1.x0[3], 0.4047333232068591),
        (op1.x0[6], 0.9999666830750727),
        (op1.u0[0], 0.0012105778516061595),
        (op1.u0[1], 1.0512),
    ];
    for (got, want) in tight1 {
        assert!((got - want).abs() < 1e-8, "{got} vs {want}");
    }
    // published Table values
    assert!((op1.x0[0] - -0.9185).abs() < 2e-3);
    assert!((op1.x0[1] - 1.6315).abs() < 2e-3);
    assert!((op1.x0[3] - 0.4047).abs() < 2e-3);
    // damper currents vanish at equilibrium
    assert!(op1.x0[2].abs() < 1e-4 && op1.x0[4].abs() < 1e-4);

    let op2 = plant_equilibrium(&pc, 1.34899, 1.39899, &OPII_GUESS_PLANT).unwrap();
    let tight2 = [
        (op2.x0[0], -1.4280779693460557),
        (op2.x0[1], 2.377867951032265),
        (op2.x0[3], 0.37471833632499674),
        (op2.x0[6], 0.8867631878219946),
        (op2.u0[0], 0.0017643780196659662),
    ];
    for (got, want) in tight2 {
        assert!((got - want).abs() < 1e-8, "{got} vs {want}");
    }
    assert!((op2.x0[0] - -1.4281).abs() < 2e-3);
    assert!((op2.x0[1] - 2.37786).abs() < 2e-3);
    assert!(op2.x0[2].abs() < 1e-4 && op2.x0[4].abs() < 1e-4);

    // rhs residual at the solved equilibria
    for op in [&op1, &op2] {
        let dx = plant_rhs(&pc, &op.x0, op.u0, 1.0);
        assert!(dx.iter().all(|v| v.abs() < 1e-9));
    }
}

#[test]
fn plant_outputs_match_table() {
    let pc = plant();
    let op1 = plant_equilibrium(&pc, 1.0012, 1.17233, &OPI_GUESS_PLANT).unwrap();
    let (vt, vd, vq) = plant_outputs(&pc, &op1.x0, op1.u0, 1.0);
    assert!((vt - 1.17233).abs() < 1e-8);
    assert!((vd - -0.6628).abs() < 1e-3);
    assert!((vq - 0.9670).abs() < 1e-3);
    let op2 = plant_equilibrium(&pc, 1.34899, 1.39899, &OPII_GUESS_PLANT).unwrap();
    let (vt2, _, _) = plant_outputs(&pc, &op2.x0, op2.u0, 1.0);
    assert!((vt2 - 1.39899).abs() < 1e-8);
}

#[test]
fn models_agree_on_terminal_voltage() {
    // reduced and full models evaluate V_t consistently at both loadings
    let c = cdm();
    let pc = plant();
    for (tm, vt, gc, gp) in [
        (1.0012, 1.17233, OPI_GUESS_CDM, OPI_GUESS_PLANT),
        (1.34899, 1.39899, OPII_GUESS_CDM, OPII_GUESS_PLANT),
    ] {
        let oc = find_equilibrium(&c, tm, vt, gc).unwrap();
        let op = plant_equilibrium(&pc, tm, vt, &gp).unwrap();
        assert!((oc.vt0 - op.vt0).abs() < 5e-3);
    }
}

#[test]
fn eq_prime_reconstruction_variants() {
    let c = cdm();
    let pc = plant();
    let op = plant_equilibrium(&pc, 1.0012, 1.17233, &OPI_GUESS_PLANT).unwrap();
    let (id, i_f, delta) = (op.x0[0], op.x0[1], op.x0[6]);
    let ea = reconstruct_eq_prime_a(&c, i_f, delta);
    let eb = reconstruct_eq_prime_b(&c, i_f, id);
    assert!((eb - 1.192477880859186).abs() < 1e-8);
    assert!((ea - 1.1925).abs() < 2e-3);
    assert!((eb - 1.1925).abs() < 2e-3);
    assert!((ea - eb).abs() < 2e-3);
}

#[test]
fn linearization_matches_reference() {
    let c = cdm();
    let op = find_equilibrium(&c, 1.0012, 1.17233, OPI_GUESS_CDM).unwrap();
    let lm = linearize_cdm(&c, &op).unwrap();
    let a_ref = Matrix::from_rows(&[
        &[-0.5517166779557998, 0.0, -0.3062410797875199, 0.0, 0.0],
        &[-0.2778490925901409, 0.0, -0.30535297304293857, 0.21097046413502107, 0.0],
        &[0.0, 1.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, -2.0, 2.0],
        &[0.0, -0.25, 0.0, 0.0, -5.0],
    ]);
    assert!(lm.a.sub(&a_ref).unwrap().max_abs() < 1e-9);
    let c_ref = Matrix::from_rows(&[
        &[0.5254565247487812, 0.0, 0.029202144437641096, 0.0, 0.0],
        &[0.0, 1.0, 0.0, 0.0, 0.0],
    ]);
    assert!(lm.c.sub(&c_ref).unwrap().max_abs() < 1e-9);
    assert!((lm.b[(0, 0)] - c.g11).abs() < 1e-14);
    assert!((lm.b[(4, 1)] - c.g55).abs() < 1e-14);

    // published rounding of selected A entries
    assert!((lm.a[(0, 0)] - -0.5517).abs() < 5e-5);
    assert!((lm.a[(0, 2)] - -0.3062).abs() < 5e-5);
    assert!((lm.a[(1, 0)] - -0.2778).abs() < 5e-5);
    assert!((lm.a[(1, 3)] - 0.2110).abs() < 5e-5);
}

#[test]
fn open_loop_spectrum() {
    let c = cdm();
    let op = find_equilibrium(&c, 1.0012, 1.17233, OPI_GUESS_CDM).unwrap();
    let lm = linearize_cdm(&c, &op).unwrap();
    let e = eigenvalues(&lm.a).unwrap();
    let expect = [
        (-5.006916958334353, 0.0),
        (-1.9838662490170655, 0.0),
        (-0.35085933422958193, 0.0),
        (-0.10503706818739797, -0.477716034271053),
        (-0.10503706818739797, 0.477716034271053),
    ];
    for (z, (re, im)) in e.iter().zip(expect) {
        assert!((z.re - re).abs() < 1e-8 && (z.im - im).abs() < 1e-8, "{z:?} vs ({re},{im})");
    }
}

#[test]
fn fd_jacobian_matches_analytic() {
    let c = cdm();
    let op = find_equilibrium(&c, 1.0012, 1.17233, OPI_GUESS_CDM).unwrap();
    let lm = linearize_cdm(&c, &op).unwrap();
    let h = 1e-6;
    for j in 0..5 {
        let mut xp = op.x0;
        let mut xm = op.x0;
        xp[j] += h;
        xm[j] -= h;
        let fp = cdm_rhs(&c, &xp, op.u0, 1.0);
        let fm = cdm_rhs(&c, &xm, op.u0, 1.0);
        for i in 0..5 {
            let fd = (fp[i] - fm[i]) / (2.0 * h);
            assert!(
                (fd - lm.a[(i, j)]).abs() <= 1e-6,
                "A[{i}][{j}]: fd {fd} vs analytic {}",
                lm.a[(i, j)]
            );
        }
    }
    // input Jacobian (away from the EFD clamp boundary)
    for j in 0..2 {
        let mut up = op.u0;
        let mut um = op.u0;
        up[j] += h;
        um[j] -= h;
        let fp = cdm_rhs(&c, &op.x0, up, 1.0);
        let fm = cdm_rhs(&c, &op.x0, um, 1.0);
        for i in 0..5 {
            let fd = (fp[i] - fm[i]) / (2.0 * h);
            assert!((fd - lm.b[(i, j)]).abs() <= 1e-6);
        }
    }
}

#[test]
fn transform_and_relative_degree() {
    let c = cdm();
    let op = find_equilibrium(&c, 1.0012, 1.17233, OPI_GUESS_CDM).unwrap();
    let z = transform_state(&c, &op.x0, 1.0);
    // at equilibrium the chain coordinates collapse to [δ0, 0, 0, T_m0, 0]
    assert!((z[0] - op.x0[2]).abs() < 1e-12);
    assert!(z[1].abs() < 1e-12);
    assert!(z[2].abs() < 1e-9);
    assert!((z[3] - 1.0012).abs() < 1e-12);
    assert!(z[4].abs() < 1e-9);
    assert_eq!(relative_degree_check(&c, &op.x0).unwrap(), (3, 2));
}

#[test]
fn efd_clamp_in_cdm_rhs() {
    let c = cdm();
    let op = find_equilibrium(&c, 1.0012, 1.17233, OPI_GUESS_CDM).unwrap();
    let d_hi = cdm_rhs(&c, &op.x0, [7.0, op.u0[1]], 1.0);
    let d_lim = cdm_rhs(&c, &op.x0, [5.0, op.u0[1]], 1.0);
    assert!((d_hi[0] - d_lim[0]).abs() < 1e-15);
}
