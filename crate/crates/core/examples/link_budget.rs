//! Maps transmit power to average SNR for the reference THz budget.

use risthz::channel::{path_gain, LinkBudget};
use risthz::cli::{dbm_to_watts, linear_to_db};

fn main() {
    let lb = LinkBudget::reference();
    println!("hop gains: {:.3} dB, {:.3} dB", 20.0 * path_gain(&lb, lb.d1_m).log10(), 20.0 * path_gain(&lb, lb.d2_m).log10());
    println!("cascade power gain: {:.3} dB", 20.0 * lb.cascade_gain().log10());
    println!("{:>8} {:>10}", "Pt dBm", "SNR dB");
    for dbm in [60.0, 70.0, 80.0, 90.0, 100.0] {
        println!("{dbm:>8} {:>10.2}", linear_to_db(lb.average_snr(dbm_to_watts(dbm))));
    }
}
