/// A bundled scenario.
#[derive(Debug, Clone, Copy)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub toml: &'static str,
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "paper-sec4",
        description: "reference constants: 300 GHz, 40 dBi, 20 m + 50 m, N = 2, pointing error, 2-bit phase",
        toml: include_str!("../../presets/paper-sec4.toml"),
    },
    Preset {
        name: "outage-n2",
        description: "outage vs P_t, N = 2, alpha = 2, mu = 1, no pointing error, exact + asymptotic + MC",
        toml: include_str!("../../presets/outage-n2.toml"),
    },
    Preset {
        name: "outage-n10-1bit",
        description: "outage vs P_t, N = 10, 1-bit phase quantization, MC only",
        toml: include_str!("../../presets/outage-n10-1bit.toml"),
    },
    Preset {
        name: "outage-n2-pointing",
        description: "outage vs P_t, N = 2, with pointing error, exact + asymptotic + MC",
        toml: include_str!("../../presets/outage-n2-pointing.toml"),
    },
    Preset {
        name: "ber-n2-mu4",
        description: "BPSK error rate vs average SNR, N = 2, alpha = 2, mu = 4",
        toml: include_str!("../../presets/ber-n2-mu4.toml"),
    },
];

pub fn preset(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}
