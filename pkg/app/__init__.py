import logging

from flask import Flask
from config import Config


def create_app(config_class=Config):
    app = Flask(__name__)
    app.config.from_object(config_class)

    # 库内各模块使用 logging.getLogger(__name__)，级别统一由 LOG_LEVEL 控制
    logging.basicConfig(
        level=app.config['LOG_LEVEL'],
        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
    )
    logging.getLogger('app').setLevel(app.config['LOG_LEVEL'])

    from app.commands import main_bp, crossconn_bp, ideal_bp
    app.register_blueprint(main_bp)
    app.register_blueprint(crossconn_bp)
    app.register_blueprint(ideal_bp)

    app.logger.debug(f"crossconn 已加载，表上限 n={app.config['CROSSCONN_MAX_TABLE_N']}")
    return app
