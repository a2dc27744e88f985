use tandem_core::board::{perft, Position};

#[test]
#[ignore]
fn perft_speed() {
    let pos = Position::start();
    let t = std::time::Instant::now();
    let n = perft(&pos, 5);
    let dt = t.elapsed().as_secs_f64();
    println!("perft5 = {} in {:.3}s ({:.2} Mnps)", n, dt, n as f64 / dt / 1e6);
    assert_eq!(n, 4_865_609);
}
