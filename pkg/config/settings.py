import os
import dotenv

dotenv.load_dotenv()

class Settings:
    # 진단 출력 (stdout 에는 JSON 만 나간다)
    NO_COLOR = os.getenv("NO_COLOR") is not None
    LOG_FILE = None                   # 예: "gaussian_recon.log"

    # 물리 상수
    HBAR = 1.0                        # 기본 ħ (플래그/필드로 덮어쓰기)

    # 수치 허용오차
    SYMPLECTIC_TOL = 1e-10            # ‖SᵀJS − J‖_F 상대 허용오차
    PURE_TOL = 1e-9                   # (2/ħ)Σ symplectic 판정 / purity = 1 판정
    SATURATION_BAND = 1e-12           # ΔxΔp = ħ 포화 판정 (상대)
    CENTER_TOL = 1e-12                # 원점 중심 판정
    LOEWNER_TOL = 1e-10               # Löwner 포함 판정: λ_max 비율 ≤ 1 + tol (상대)

    # MVEE (Khachiyan)
    MVEE_EPS = 1e-7
    MVEE_MAX_ITER = 200_000

    # 이상치 제거
    MAX_TRIM_FRACTION = 0.2

    # Wigner 그리드 출력 제한 (파일 크기)
    WIGNER_MAX_N = 2

    # 볼록 껍질 사전 축소 (qhull 은 고차원에서 느림)
    HULL_MAX_DIM = 6
