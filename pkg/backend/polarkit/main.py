import logging

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from . import __version__
from .config import APP_NAME, HOST, LOG_FORMAT, LOG_LEVEL, PORT
from .routers.analysis import router as analysis_router
from .routers.kernels import router as kernels_router
from .routers.signalsets import router as signalsets_router

app = FastAPI(
    title=APP_NAME,
    description="distance-spectrum analysis and design of non-binary polarization kernels for AWGN signal sets",
    version=__version__,
)

# Basic logging configuration (console)
logging.basicConfig(level=LOG_LEVEL, format=LOG_FORMAT)
logger = logging.getLogger("polarkit")

# CORS middleware
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


# Health check endpoint
@app.get("/health")
async def health_check():
    return {"status": "ok"}


@app.get("/api/health")
async def api_health():
    return {"status": "ok", "message": f"{APP_NAME} API is running"}


# Routers
app.include_router(signalsets_router)
app.include_router(kernels_router)
app.include_router(analysis_router)


def serve(host: str = HOST, port: int = PORT, reload: bool = False) -> None:
    import uvicorn

    logger.info("serving on %s:%s", host, port)
    uvicorn.run("polarkit.main:app", host=host, port=port, reload=reload)


if __name__ == "__main__":
    serve(reload=True)
