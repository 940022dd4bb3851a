"""Monte Carlo trial engines and SNR sweeps."""
